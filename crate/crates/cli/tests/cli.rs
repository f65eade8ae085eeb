use std::process::{Command, Output};

use charsum::search::{Histogram, OccupancyGrid, WeightWitness};
use charsum::{and_table, sum_table, CharacterSum, Circuit, QuadraticForm};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charsum"))
        .args(args)
        .output()
        .expect("spawn charsum")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "charsum {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("charsum-cli-{}-{name}", std::process::id()))
}

#[test]
fn rank_and_normal_form() {
    assert_eq!(stdout(&["rank", "x1x2+x3x4+x5x6", "--n", "6"]), "3\n");
    assert_eq!(
        stdout(&["normal-form", "x1x3+x2x3+x4+1", "--n", "4"]),
        "x1x2+x3+1\n"
    );
}

#[test]
fn decomposition_recomposes() {
    let q = QuadraticForm::parse("x1x2+x1x3+x2x4+x3+1", 5).unwrap();
    let text = stdout(&["decompose", &q.to_string(), "--n", "5"]);
    let mut total = QuadraticForm::zero(5);
    for line in text.lines() {
        if let Some(pair) = line.strip_prefix("pair=") {
            let (a, b) = pair.split_once(" * ").unwrap();
            let a = QuadraticForm::parse(a, 5).unwrap().affine_part();
            let b = QuadraticForm::parse(b, 5).unwrap().affine_part();
            total = total.add(&a.mul(&b).unwrap()).unwrap();
        } else if let Some(r) = line.strip_prefix("residual=") {
            total = total.add(&QuadraticForm::parse(r, 5).unwrap()).unwrap();
        }
    }
    assert_eq!(total, q);
    assert_eq!(
        stdout(&["decompose", "0", "--n", "4"]),
        "rank=0\nresidual=0\n"
    );
}

#[test]
fn witness_and_verify_and_reparse() {
    let w = WeightWitness::parse(&stdout(&["bfs-and", "--n", "3"])).unwrap();
    assert!(w.verify());
    let text = stdout(&["verify-and", "--n", "8"]);
    assert!(text.contains("verified=true"));
    let sum = text.lines().find_map(|l| l.strip_prefix("sum=")).unwrap();
    let s = CharacterSum::parse(sum, 8).unwrap();
    assert_eq!(sum_table(&s), and_table(8).unwrap());
}

#[test]
fn sampling_is_reproducible_and_reparses() {
    let args = [
        "sample",
        "--n",
        "5",
        "--w",
        "2",
        "--samples",
        "3000",
        "--seed",
        "5",
    ];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert!(a.starts_with("# seed=5 "));
    let h = Histogram::from_csv(5, &a).unwrap();
    assert_eq!(h.total, 3000);
    assert_ne!(
        a,
        stdout(&[
            "sample",
            "--n",
            "5",
            "--w",
            "2",
            "--samples",
            "3000",
            "--seed",
            "6"
        ])
    );

    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "sample",
        "--n",
        "5",
        "--w",
        "2",
        "--samples",
        "3000",
        "--seed",
        "5",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["seed"], 5);
    assert_eq!(json["total"], 3000);
}

#[test]
fn default_seed_is_echoed() {
    let text = stdout(&["grid", "--samples", "2000"]);
    assert!(text.starts_with("# seed=0 "));
    let grid = OccupancyGrid::parse(&text).unwrap();
    assert_eq!(grid.side(), 65);
    assert!(grid.marked().all(|(o, t)| (o + t) % 2 == 0));
}

#[test]
fn chart_file_is_svg() {
    let path = temp_path("chart.svg");
    stdout(&[
        "sample",
        "--samples",
        "500",
        "--chart",
        path.to_str().unwrap(),
    ]);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    std::fs::remove_file(path).ok();
}

#[test]
fn convert_round_trip_through_files() {
    let sum = "x1x2+x3 ; 0 ; x2+x4+1";
    let netlist = stdout(&["convert", "--to", "circuit", "--n", "4", sum]);
    let c = Circuit::parse_netlist(&netlist).unwrap();
    assert_eq!(c.to_string() + "\n", netlist);
    let path = temp_path("netlist.txt");
    std::fs::write(&path, &netlist).unwrap();
    let back = stdout(&["convert", "--to", "characters", path.to_str().unwrap()]);
    let s = CharacterSum::parse(sum, 4).unwrap();
    assert_eq!(
        sum_table(&CharacterSum::parse(back.trim(), 4).unwrap()),
        sum_table(&s)
    );
    std::fs::remove_file(path).ok();

    let d2 = stdout(&[
        "convert", "--to", "circuit", "--depth", "2", "--expand", "--n", "4", sum,
    ]);
    assert_eq!(Circuit::parse_netlist(&d2).unwrap().depth(), 2);
    assert_eq!(
        run(&["convert", "--to", "circuit", "--depth", "2", "--n", "4", sum])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn scan_pairs_from_a_pool_file() {
    let pool = "# planted split of AND4\n1000000000000000\n0000000000000000\n2000000000000001\n";
    let path = temp_path("pool.txt");
    std::fs::write(&path, pool).unwrap();
    let text = stdout(&["scan-pairs", path.to_str().unwrap()]);
    std::fs::remove_file(path).ok();
    assert!(text.contains("pairs=1"));
    assert!(text.lines().any(|l| l == "0,2"));
}

#[test]
fn g72_commands() {
    let text = stdout(&["g72", "verify"]);
    assert_eq!(text.lines().filter(|l| l.ends_with(": ok")).count(), 12);
    assert!(text.contains("order=72"));

    let path = temp_path("program.txt");
    std::fs::write(
        &path,
        "group=g72\naccept=aa\nbit=1 zero=1 one=a\nbit=2 zero=b one=a\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert!(stdout(&["g72", "eval", "--program", p, "--input", "11"]).contains("accepted=true"));
    assert!(stdout(&["g72", "eval", "--program", p, "--input", "10"]).contains("accepted=false"));
    assert_eq!(
        run(&["g72", "eval", "--program", p, "--input", "1"])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_file(path).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bfs-and", "--n", "5"]).status.code(), Some(3));
    assert_eq!(run(&["rank", "x1x2x3", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["rank", "x9", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&["g72", "eval", "--program", "/nonexistent", "--input", "1"])
            .status
            .code(),
        Some(1)
    );
    let err = run(&["rank", "x1x2x3", "--n", "3"]).stderr;
    assert_eq!(String::from_utf8(err).unwrap().lines().count(), 1);
}
