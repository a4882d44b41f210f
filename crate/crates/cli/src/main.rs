//! Batch front end: parse a problem document, run the pipeline or the
//! checks, emit text or JSON on stdout. Diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 computation error or failed check, 2 document
//! validation error.

use clap::{Parser, Subcommand, ValueEnum};
use quiver_dt::doc::{self, ProblemDocument};
use quiver_dt::dtpipe;
use quiver_dt::fqoracle::{self, CountRequest};
use quiver_dt::quiver::DimVector;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "quiverdt",
    version,
    about = "Exact motivic Donaldson-Thomas invariants of quivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    /// Quantum dilogarithm identity over the A2 quiver
    Dilog,
    /// Functional equation of the A-series
    Functional,
    /// B-series identities, closed forms included
    Bseries,
    /// Everything above at its default parameters
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the DT table of a problem document
    Dt {
        #[arg(long)]
        input: PathBuf,
        /// Overrides the document's truncation
        #[arg(long)]
        truncation: Option<u32>,
        /// Append the Euler specialization of every entry
        #[arg(long)]
        euler: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Worker threads; results are independent of this
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Emit the stacky generating series of a problem document
    Series {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        truncation: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Verify the built-in identities; exit code 1 on any failure
    Check {
        #[arg(value_enum)]
        name: CheckName,
        /// Total degree of the verification
        #[arg(long)]
        truncation: Option<u32>,
        /// Loop counts for the functional equation / B-series checks
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        m: Option<Vec<i64>>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Count F_q points of the relation variety of a document
    Oracle {
        #[arg(long)]
        input: PathBuf,
        /// Dimension vector, comma separated
        #[arg(long, value_delimiter = ',')]
        dim: Vec<u32>,
        /// Prime field size (2, 3 or 5)
        #[arg(long)]
        prime: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

enum AppError {
    /// Malformed document or arguments: exit 2
    Validation(String),
    /// Computation failed or a checked identity does not hold: exit 1
    Computation(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Validation(_) => 2,
            AppError::Computation(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Validation(m) | AppError::Computation(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn configure_jobs(jobs: Option<usize>) {
    if let Some(k) = jobs {
        // ignore a pool that is already installed
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
}

fn load_document(path: &PathBuf) -> Result<ProblemDocument, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Validation(format!("{}: {}", path.display(), e)))?;
    doc::parse_document(&text).map_err(|e| AppError::Validation(e.to_string()))
}

fn resolve_truncation(doc: &ProblemDocument, flag: Option<u32>) -> Result<u32, AppError> {
    flag.or(doc.truncation).ok_or_else(|| {
        AppError::Validation("truncation: required (document field or --truncation)".into())
    })
}

#[derive(Serialize)]
struct DtOutput {
    command: &'static str,
    truncation: u32,
    stability: Vec<[String; 2]>,
    generic: bool,
    genericity_bound: u32,
    convention: &'static str,
    entries: Vec<doc::DtRecord>,
}

#[derive(Serialize)]
struct SeriesOutput {
    command: &'static str,
    truncation: u32,
    entries: Vec<doc::SeriesRecord>,
}

#[derive(Serialize)]
struct CheckResult {
    name: String,
    truncation: u32,
    pass: bool,
}

#[derive(Serialize)]
struct CheckOutput {
    command: &'static str,
    results: Vec<CheckResult>,
}

#[derive(Serialize)]
struct OracleOutput {
    command: &'static str,
    dim: Vec<u32>,
    prime: u32,
    count: u64,
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Dt {
            input,
            truncation,
            euler,
            format,
            jobs,
        } => {
            configure_jobs(jobs);
            let document = load_document(&input)?;
            let bound = resolve_truncation(&document, truncation)?;
            let table = document
                .problem
                .dt_invariants(&document.charge, bound)
                .map_err(|e| AppError::Computation(e.to_string()))?;
            let stability = document
                .charge
                .parts()
                .iter()
                .map(|(re, im)| [re.to_string(), im.to_string()])
                .collect();
            let output = DtOutput {
                command: "dt",
                truncation: bound,
                stability,
                generic: table.generic,
                genericity_bound: table.genericity_bound,
                convention: table.convention,
                entries: doc::dt_records(&table, euler),
            };
            match format {
                Format::Json => print_json(&output),
                Format::Text => {
                    outln(format_args!(
                        "# dt N={} stability={} generic={} (bound {}) convention={}",
                        output.truncation,
                        fmt_stability(&output.stability),
                        output.generic,
                        output.genericity_bound,
                        output.convention
                    ));
                    for r in &output.entries {
                        let euler_col = r
                            .euler
                            .as_ref()
                            .map(|e| format!("\teuler={}", e))
                            .unwrap_or_default();
                        outln(format_args!(
                            "d={}\tdt={}{}",
                            fmt_dim(&r.d),
                            r.dt,
                            euler_col
                        ));
                    }
                }
            }
            Ok(())
        }
        Command::Series {
            input,
            truncation,
            format,
            jobs,
        } => {
            configure_jobs(jobs);
            let document = load_document(&input)?;
            let bound = resolve_truncation(&document, truncation)?;
            let series = document
                .problem
                .stacky_series(bound)
                .map_err(|e| AppError::Computation(e.to_string()))?;
            let output = SeriesOutput {
                command: "series",
                truncation: bound,
                entries: doc::series_records(&series),
            };
            match format {
                Format::Json => print_json(&output),
                Format::Text => {
                    outln(format_args!("# series N={}", output.truncation));
                    for r in &output.entries {
                        outln(format_args!("d={}\tcoeff={}", fmt_dim(&r.d), r.coeff));
                    }
                }
            }
            Ok(())
        }
        Command::Check {
            name,
            truncation,
            m,
            format,
        } => {
            let mut results = Vec::new();
            let run_dilog = matches!(name, CheckName::Dilog | CheckName::All);
            let run_functional = matches!(name, CheckName::Functional | CheckName::All);
            let run_bseries = matches!(name, CheckName::Bseries | CheckName::All);
            if run_dilog {
                let n = truncation.unwrap_or(8);
                results.push(CheckResult {
                    name: "dilog".into(),
                    truncation: n,
                    pass: dtpipe::check_dilog_identity(n),
                });
            }
            if run_functional {
                let n = truncation.unwrap_or(8);
                let ms = m.clone().unwrap_or_else(|| vec![-1, 0, 1, 2, 3, 4]);
                for m in ms {
                    results.push(CheckResult {
                        name: format!("functional m={}", m),
                        truncation: n,
                        pass: dtpipe::check_functional_equation(m, n),
                    });
                }
            }
            if run_bseries {
                let n = truncation.unwrap_or(6);
                let ms = m.unwrap_or_else(|| vec![0, 1, 2]);
                for m in ms {
                    if m < 0 {
                        return Err(AppError::Validation(
                            "bseries: m must be nonnegative".into(),
                        ));
                    }
                    let pass = dtpipe::b_series_check(m as u32, n)
                        .map_err(|e| AppError::Computation(e.to_string()))?;
                    results.push(CheckResult {
                        name: format!("bseries m={}", m),
                        truncation: n,
                        pass,
                    });
                }
            }
            let all_pass = results.iter().all(|r| r.pass);
            match format {
                Format::Json => print_json(&CheckOutput {
                    command: "check",
                    results,
                }),
                Format::Text => {
                    for r in &results {
                        outln(format_args!(
                            "{} {} N={}",
                            if r.pass { "PASS" } else { "FAIL" },
                            r.name,
                            r.truncation
                        ));
                    }
                }
            }
            if all_pass {
                Ok(())
            } else {
                Err(AppError::Computation("identity check failed".into()))
            }
        }
        Command::Oracle {
            input,
            dim,
            prime,
            format,
            jobs,
        } => {
            configure_jobs(jobs);
            let document = load_document(&input)?;
            if dim.len() != document.problem.quiver.vertex_count() {
                return Err(AppError::Validation(format!(
                    "dim: {} entries for {} vertices",
                    dim.len(),
                    document.problem.quiver.vertex_count()
                )));
            }
            let request = CountRequest {
                quiver: (*document.problem.quiver).clone(),
                potential: document.problem.potential.clone(),
                cut: document.problem.cut.clone(),
                dim: DimVector(dim.clone()),
                q: prime,
            };
            let count = fqoracle::count_representations(&request)
                .map_err(|e| AppError::Computation(e.to_string()))?;
            let output = OracleOutput {
                command: "oracle",
                dim,
                prime,
                count,
            };
            match format {
                Format::Json => print_json(&output),
                Format::Text => outln(format_args!("count={}", output.count)),
            }
            Ok(())
        }
    }
}

fn fmt_stability(parts: &[[String; 2]]) -> String {
    let inner: Vec<String> = parts
        .iter()
        .map(|[re, im]| format!("[{},{}]", re, im))
        .collect();
    format!("[{}]", inner.join(","))
}

fn fmt_dim(d: &[u32]) -> String {
    let inner: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("[{}]", inner.join(","))
}

fn print_json<T: Serialize>(value: &T) {
    outln(format_args!(
        "{}",
        serde_json::to_string(value).expect("serializable")
    ));
}

/// Write one stdout line; a consumer that closed the pipe ends the run
/// quietly instead of panicking.
fn outln(line: std::fmt::Arguments) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let res = out.write_fmt(line).and_then(|_| out.write_all(b"\n"));
    if let Err(e) = res {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {}", e);
        std::process::exit(1);
    }
}
