//! Minimal SVG bar chart for support histograms.

use std::fmt::Write as _;

use charsum::search::Histogram;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 40.0;

pub fn histogram_svg(h: &Histogram, title: &str) -> String {
    let slots = (1u64 << h.n) + 1;
    let peak = h.bins.values().copied().max().unwrap_or(1).max(1) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let bar_w = plot_w / slots as f64;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#,
        WIDTH / 2.0
    );
    for (&support, &count) in &h.bins {
        let bar_h = count as f64 / peak * plot_h;
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue"><title>{support}: {count}</title></rect>"#,
            MARGIN + support as f64 * bar_w,
            HEIGHT - MARGIN - bar_h,
            (bar_w - 1.0).max(1.0),
            bar_h
        );
    }
    let axis_y = HEIGHT - MARGIN;
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    for tick in (0..slots).step_by(8) {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{tick}</text>"#,
            MARGIN + (tick as f64 + 0.5) * bar_w,
            axis_y + 15.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
