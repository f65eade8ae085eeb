//! `charsum`: runs the character-sum experiments and converters from the
//! command line.

mod chart;

use std::fmt::Write as _;
use std::io::{self, Read as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charsum::search::{
    bfs_min_weight, enumerate_weight3, occupancy_grid, sample_histogram, sample_tables,
    scan_complementary_pairs, Generators, Histogram,
};
use charsum::{
    and_product_construction, and_table, characters_to_depth2, characters_to_depth3,
    check_g72_relations, closure, depth2_to_characters, depth3_to_characters, eval_program,
    expand_character, g72_generators, s3_generators, sum_table, witt_decompose, witt_normal_form,
    CharacterSum, Circuit, FunctionTable, Program, QuadraticForm,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "charsum",
    version,
    about = "Character sums, MOD3-of-MOD2 circuits and the 2-weight of AND"
)]
struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Circuit,
    Characters,
}

#[derive(Subcommand)]
enum Command {
    /// Witt decomposition of a quadratic form.
    Decompose {
        form: String,
        #[arg(long)]
        n: usize,
    },
    /// Witt rank of a quadratic form.
    Rank {
        form: String,
        #[arg(long)]
        n: usize,
    },
    /// Witt normal form of a quadratic form.
    NormalForm {
        form: String,
        #[arg(long)]
        n: usize,
    },
    /// Exact minimum 2-weight of AND_n by breadth-first search (n <= 4).
    BfsAnd {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Allow only affine characters as summands.
        #[arg(long)]
        linear: bool,
    },
    /// Support histogram of random sums of w quadratic characters.
    Sample {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        w: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also write an SVG bar chart.
        #[arg(long)]
        chart: Option<PathBuf>,
        /// Print the sampled tables, one per line, instead of a histogram.
        #[arg(long)]
        tables: bool,
    },
    /// Exact support distribution of all weight-3 sums at n = 6.
    EnumerateW3 {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        chart: Option<PathBuf>,
    },
    /// Occupancy grid of (ones, twos) counts over random sums.
    Grid {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        w: usize,
        #[arg(long, default_value_t = 10_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Builds the product construction for AND_n and checks it pointwise.
    VerifyAnd {
        #[arg(long)]
        n: usize,
    },
    /// Converts between character sums and circuit netlists.
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        /// Circuit depth: 2 (linear characters) or 3.
        #[arg(long, default_value_t = 3)]
        depth: u8,
        /// Number of variables of a character sum.
        #[arg(long)]
        n: Option<usize>,
        /// Expand quadratic characters into linear ones before building a depth-2 circuit.
        #[arg(long)]
        expand: bool,
        /// A character sum, or a netlist file ("-" for stdin).
        input: String,
    },
    /// Finds pairs in a pool of tables that sum to AND_n.
    ScanPairs {
        /// Pool file, one table per line.
        pool: Option<PathBuf>,
        /// Scan this many sampled tables instead of a file.
        #[arg(long, conflicts_with = "pool")]
        samples: Option<u64>,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        w: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The group G72.
    G72 {
        #[command(subcommand)]
        action: G72Action,
    },
}

#[derive(Subcommand)]
enum G72Action {
    /// Checks the defining relations and the group orders.
    Verify,
    /// Evaluates a program file on an input bit string.
    Eval {
        #[arg(long)]
        program: PathBuf,
        /// Bits such as "0110", bit 1 first.
        #[arg(long)]
        input: String,
    },
}

#[derive(Debug)]
enum CliError {
    Core(charsum::Error),
    Io(PathBuf, io::Error),
    Verification(String),
}

impl From<charsum::Error> for CliError {
    fn from(e: charsum::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use charsum::Error as E;
        match self {
            CliError::Core(E::Capacity(_)) => 3,
            CliError::Core(E::Verification(_)) | CliError::Verification(_) => 4,
            CliError::Core(
                E::Parse(_)
                | E::InputShape(_)
                | E::OutOfRange(_)
                | E::DimensionMismatch { .. }
                | E::UnsupportedTopology(_)
                | E::Structural(_),
            ) => 2,
            CliError::Core(_) | CliError::Io(..) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(path.into(), e))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.into(), e))
}

#[derive(Serialize)]
struct HistogramReport<'a> {
    seed: Option<u64>,
    w: usize,
    samples: Option<u64>,
    #[serde(flatten)]
    histogram: &'a Histogram,
}

fn render_histogram(header: &str, report: &HistogramReport, format: Format) -> String {
    match format {
        Format::Csv => format!("# {header}\n{}", report.histogram.to_csv()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("histogram serializes");
            s.push('\n');
            s
        }
    }
}

fn run(command: Command) -> CliResult<String> {
    let mut out = String::new();
    match command {
        Command::Decompose { form, n } => {
            let q = QuadraticForm::parse(&form, n)?;
            let d = witt_decompose(&q);
            let _ = writeln!(out, "rank={}", d.rank());
            for (a, b) in &d.pairs {
                let _ = writeln!(out, "pair={a} * {b}");
            }
            let _ = writeln!(out, "residual={}", d.residual);
        }
        Command::Rank { form, n } => {
            let q = QuadraticForm::parse(&form, n)?;
            let _ = writeln!(out, "{}", witt_decompose(&q).rank());
        }
        Command::NormalForm { form, n } => {
            let q = QuadraticForm::parse(&form, n)?;
            let _ = writeln!(out, "{}", witt_normal_form(&q));
        }
        Command::BfsAnd { n, linear } => {
            let generators = if linear {
                Generators::Linear
            } else {
                Generators::Quadratic
            };
            let w = bfs_min_weight(&and_table(n)?, generators)?;
            if !w.verify() {
                return Err(CliError::Verification(format!(
                    "witness {} does not sum to AND",
                    w.sum
                )));
            }
            let _ = writeln!(out, "{w}");
        }
        Command::Sample {
            n,
            w,
            samples,
            seed,
            format,
            chart,
            tables,
        } => {
            if tables {
                let _ = writeln!(out, "# seed={seed} n={n} w={w} samples={samples}");
                for t in sample_tables(n, w, samples, seed)? {
                    let _ = writeln!(out, "{t}");
                }
                return Ok(out);
            }
            let h = sample_histogram(n, w, samples, seed)?;
            if let Some(path) = chart {
                let title =
                    format!("supports of {samples} sums of {w} characters (n={n}, seed={seed})");
                write_file(&path, &chart::histogram_svg(&h, &title))?;
            }
            let report = HistogramReport {
                seed: Some(seed),
                w,
                samples: Some(samples),
                histogram: &h,
            };
            out = render_histogram(
                &format!("seed={seed} n={n} w={w} samples={samples}"),
                &report,
                format,
            );
        }
        Command::EnumerateW3 { format, chart } => {
            let e = enumerate_weight3(6)?;
            if let Some(path) = chart {
                write_file(
                    &path,
                    &chart::histogram_svg(&e.histogram, "supports of all weight-3 sums (n=6)"),
                )?;
            }
            let report = HistogramReport {
                seed: None,
                w: 3,
                samples: None,
                histogram: &e.histogram,
            };
            out = render_histogram("exhaustive n=6 w=3", &report, format);
        }
        Command::Grid {
            n,
            w,
            samples,
            seed,
        } => {
            let grid = occupancy_grid(n, w, samples, seed)?;
            let _ = writeln!(out, "# seed={seed} n={n} w={w} samples={samples}");
            out.push_str(&grid.to_text());
        }
        Command::VerifyAnd { n } => {
            let s = and_product_construction(n)?;
            let ok = sum_table(&s) == and_table(n)? && s.weight() == 1 << (n / 2);
            let _ = writeln!(out, "n={n}");
            let _ = writeln!(out, "weight={}", s.weight());
            let _ = writeln!(out, "sum={s}");
            let _ = writeln!(out, "verified={ok}");
            if !ok {
                return Err(CliError::Verification(format!(
                    "construction for n={n} is not AND"
                )));
            }
        }
        Command::Convert {
            to,
            depth,
            n,
            expand,
            input,
        } => match to {
            Target::Circuit => {
                let n = n.ok_or_else(|| {
                    charsum::Error::InputShape("--n is required to read a character sum".into())
                })?;
                let mut s = CharacterSum::parse(&input, n)?;
                if expand {
                    let terms = s
                        .terms()
                        .iter()
                        .flat_map(|q| expand_character(q).terms().to_vec())
                        .collect();
                    s = CharacterSum::new(n, terms)?;
                }
                let c = match depth {
                    2 => characters_to_depth2(&s)?,
                    3 => characters_to_depth3(&s)?,
                    d => {
                        return Err(
                            charsum::Error::InputShape(format!("depth {d} is not 2 or 3")).into(),
                        )
                    }
                };
                let _ = writeln!(out, "{c}");
            }
            Target::Characters => {
                let c = Circuit::parse_netlist(&read_text(Path::new(&input))?)?;
                let s = match depth {
                    2 => depth2_to_characters(&c)?,
                    3 => depth3_to_characters(&c)?,
                    d => {
                        return Err(
                            charsum::Error::InputShape(format!("depth {d} is not 2 or 3")).into(),
                        )
                    }
                };
                let _ = writeln!(out, "{s}");
            }
        },
        Command::ScanPairs {
            pool,
            samples,
            n,
            w,
            seed,
        } => {
            let tables = match (pool, samples) {
                (Some(path), _) => read_text(&path)?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(FunctionTable::parse)
                    .collect::<charsum::Result<Vec<_>>>()?,
                (None, Some(s)) => {
                    let _ = writeln!(out, "# seed={seed} n={n} w={w} samples={s}");
                    sample_tables(n, w, s, seed)?
                }
                (None, None) => {
                    return Err(
                        charsum::Error::InputShape("give a pool file or --samples".into()).into(),
                    )
                }
            };
            let pairs = scan_complementary_pairs(&tables)?;
            let _ = writeln!(out, "# pool={} pairs={}", tables.len(), pairs.len());
            out.push_str("i,j\n");
            for (i, j) in &pairs {
                let _ = writeln!(out, "{i},{j}");
            }
            if !pairs.is_empty() {
                eprintln!(
                    "found {} pair(s) summing to AND_{}; check them by hand",
                    pairs.len(),
                    tables[0].n()
                );
            }
        }
        Command::G72 { action } => match action {
            G72Action::Verify => {
                let mut ok = true;
                for (r, holds) in check_g72_relations() {
                    ok &= holds;
                    let _ = writeln!(out, "{r}: {}", if holds { "ok" } else { "FAILED" });
                }
                let order = closure(&g72_generators())?.len();
                let s3 = closure(&s3_generators())?.len();
                let _ = writeln!(out, "order={order}");
                let _ = writeln!(out, "s3_order={s3}");
                if !ok || order != 72 || s3 != 6 {
                    return Err(CliError::Verification(out));
                }
            }
            G72Action::Eval { program, input } => {
                let p = Program::parse(&read_text(&program)?)?;
                let bits = input
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(charsum::Error::Parse(format!("input bit {c:?}"))),
                    })
                    .collect::<charsum::Result<Vec<_>>>()?;
                let (g, accepted) = eval_program(&p, &bits)?;
                let _ = writeln!(out, "element={g}");
                let _ = writeln!(out, "accepted={accepted}");
            }
        },
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|text| match &cli.output {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let first = e.to_string();
            eprintln!("charsum: {}", first.lines().next().unwrap_or_default());
            ExitCode::from(e.exit_code())
        }
    }
}
