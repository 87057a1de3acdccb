//! `lincommon`: command-line front end for analysing and certifying linear
//! systems over finite fields.
//!
//! Exit codes: 0 success or certified, 1 usage error or failed check,
//! 2 parse error, 3 budget exceeded, 4 inconclusive, 5 domain error.

mod analysis;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use lincommon::budget::DEFAULT_BUDGET;
use lincommon::certify::gowers::{gowers_twist, GowersSpec};
use lincommon::certify::{
    classify_single_equation, uncommonness_pipeline, verify_report, CertificateReport,
    PipelineConfig, RouteChoice, Sampler, SearchConfig,
};
use lincommon::density::{self, FunctionTable, Verdict};
use lincommon::fourier::verify_fourier_bound;
use lincommon::gf::{Elem, FieldSpec};
use lincommon::io::parse_system;
use lincommon::linsys::LinearSystem;
use lincommon::{oracle, rational, Budget, Error, Result};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "lincommon",
    version,
    about = "Commonness analysis of linear systems over finite fields"
)]
struct Cli {
    /// Maximum size of any single enumeration.
    #[arg(long, global = true, env = "LINCOMMON_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Emit JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,

    /// Print the elapsed wall-clock time to stderr.
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, redundancy, s(L), c(L) and critical sets of a system file.
    Analyze { path: PathBuf },

    /// Search for a certificate of uncommonness; prints the JSON report.
    Certify {
        path: PathBuf,
        /// auto, s1, s2, gowers or search.
        #[arg(long, default_value = "auto")]
        route: RouteChoice,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Witness dimension for search routes (default: try 1, then 2).
        #[arg(long)]
        d: Option<usize>,
        /// Target dimension of the twisted construction.
        #[arg(long)]
        n: Option<usize>,
        /// grid or fourier.
        #[arg(long, default_value = "grid")]
        sampler: Sampler,
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        /// Also write the report to this file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },

    /// Re-check a certificate report from scratch.
    Verify { report: PathBuf },

    /// Classify a single equation a_1 x_1 + ... + a_k x_k = 0.
    ClassifyEq {
        /// Field order.
        #[arg(long)]
        q: u64,
        /// Modulus coefficients c0,...,cκ for extension fields.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
        /// Element codes; a leading minus sign negates.
        #[arg(required = true, allow_negative_numbers = true)]
        coeffs: Vec<i64>,
    },

    /// Exact Λ_L(f) for a system file and a function table file.
    Lambda { system: PathBuf, table: PathBuf },

    /// Exact Δ_L(f) = Λ_L(1/2 + f) + Λ_L(1/2 − f) and the benchmark 2^(1−k).
    Delta { system: PathBuf, table: PathBuf },

    /// Bound on the Fourier coefficients of the quadratic twist of a table.
    Fourier {
        table: PathBuf,
        /// Dimension of the twisted function.
        #[arg(long)]
        n: usize,
        /// Twist parameters α_1,...,α_t as element codes.
        #[arg(long, value_delimiter = ',', default_value = "1,1,1,1")]
        alpha: Vec<u32>,
    },

    /// Run a brute-force oracle suite, or `all`.
    Oracle {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => e.exit(),
    };
    let start = Instant::now();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as u8
        }
    };
    if cli.timings {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    ExitCode::from(code)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<LinearSystem> {
    parse_system(&read(path)?)
}

fn load_table(path: &Path) -> Result<FunctionTable> {
    FunctionTable::from_json(&read(path)?)
}

fn load_pair(system: &Path, table: &Path) -> Result<(LinearSystem, FunctionTable)> {
    let l = load_system(system)?;
    let f = load_table(table)?;
    if f.field() != l.field() {
        return Err(Error::usage(format!(
            "table is over F_{} but the system is over {}",
            f.field().q(),
            l.field().config_line()
        )));
    }
    Ok((l, f))
}

fn json_line(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn write_stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(cli: &Cli, value: &impl Serialize, text: impl FnOnce() -> String) {
    if cli.json {
        write_stdout(&format!("{}\n", json_line(value)));
    } else {
        write_stdout(&text());
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let budget = Budget::new(cli.budget);
    match &cli.command {
        Command::Analyze { path } => {
            let l = load_system(path)?;
            let report = analysis::analyze(&l, budget)?;
            emit(cli, &report, || analysis_text(&report));
            Ok(0)
        }
        Command::Certify {
            path,
            route,
            seed,
            d,
            n,
            sampler,
            samples,
            output,
        } => {
            let l = load_system(path)?;
            let config = PipelineConfig {
                route: *route,
                search: SearchConfig {
                    samples: *samples,
                    seed: *seed,
                    sampler: *sampler,
                    ..SearchConfig::default()
                },
                d: *d,
                n: *n,
                budget,
            };
            let outcome = uncommonness_pipeline(&l, &config)?;
            let text = outcome.to_json();
            if let Some(out) = output {
                std::fs::write(out, format!("{text}\n"))
                    .map_err(|e| Error::usage(format!("cannot write {}: {e}", out.display())))?;
            }
            write_stdout(&format!("{text}\n"));
            eprintln!("verdict: {}", outcome.verdict());
            Ok(match outcome.verdict() {
                Verdict::CertifiedUncommon => 0,
                _ => EXIT_INCONCLUSIVE,
            })
        }
        Command::Verify { report } => {
            let report = CertificateReport::from_json(&read(report)?)?;
            let outcome = verify_report(&report, budget)?;
            emit(cli, &outcome, || {
                let mut s = String::new();
                for c in &outcome.checks {
                    let mark = if c.pass { "ok  " } else { "FAIL" };
                    s.push_str(&format!("{mark} {}: {}\n", c.name, c.detail));
                }
                s.push_str(if outcome.pass {
                    "certificate verified\n"
                } else {
                    "certificate rejected\n"
                });
                s
            });
            Ok(if outcome.pass { 0 } else { EXIT_FAILED_CHECK })
        }
        Command::ClassifyEq { q, modulus, coeffs } => {
            let field = FieldSpec::from_order(*q, modulus.as_deref())?;
            let elems = coeffs
                .iter()
                .map(|&c| signed_elem(&field, c))
                .collect::<Result<Vec<Elem>>>()?;
            let class = classify_single_equation(&field, &elems)?;
            let pairing = lincommon::certify::classify::zero_sum_pairing(&field, &elems).map(|p| {
                p.into_iter()
                    .map(|(i, j)| (i + 1, j + 1))
                    .collect::<Vec<_>>()
            });
            let codes: Vec<u32> = elems.iter().map(|e| e.code()).collect();
            let value = json!({
                "field": field.config_line(),
                "coefficients": codes,
                "class": class,
                "zero_sum_pairing": pairing,
            });
            emit(cli, &value, || format!("{class}\n"));
            Ok(0)
        }
        Command::Lambda { system, table } => {
            let (l, f) = load_pair(system, table)?;
            let value = rational::format(&density::lambda(&l, &f, budget)?);
            emit(cli, &json!({ "lambda": value }), || format!("{value}\n"));
            Ok(0)
        }
        Command::Delta { system, table } => {
            let (l, f) = load_pair(system, table)?;
            let delta = density::delta(&l, &f, budget)?;
            let benchmark = density::benchmark(l.k());
            let below = delta < benchmark;
            let (delta, benchmark) = (rational::format(&delta), rational::format(&benchmark));
            let value = json!({ "delta": delta, "benchmark": benchmark, "below_benchmark": below });
            emit(cli, &value, || {
                format!("delta = {delta}\nbenchmark = {benchmark}\nbelow benchmark: {below}\n")
            });
            Ok(0)
        }
        Command::Fourier { table, n, alpha } => {
            let f = load_table(table)?;
            let alpha = alpha
                .iter()
                .map(|&a| f.field().elem(a))
                .collect::<Result<Vec<Elem>>>()?;
            let d = f.d();
            let spec = GowersSpec::new(alpha, f, *n)?;
            let g = gowers_twist(&spec, budget)?;
            let report = verify_fourier_bound(&g, d, budget)?;
            emit(cli, &report, || {
                format!(
                    "max |g^(r)| = {:.12}\nbound q^(d-n/2) = {:.12}\nslack = {:.3e}\n{}\n",
                    report.max_coeff,
                    report.bound,
                    report.slack,
                    if report.pass { "pass" } else { "FAIL" }
                )
            });
            Ok(if report.pass { 0 } else { EXIT_FAILED_CHECK })
        }
        Command::Oracle { suite, seed } => {
            let names: Vec<&str> = if suite == "all" {
                oracle::SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let reports = names
                .iter()
                .map(|name| oracle::run_suite(name, *seed, budget))
                .collect::<Result<Vec<_>>>()?;
            let pass = reports.iter().all(|r| r.pass);
            emit(cli, &reports, || {
                let mut s = String::new();
                for r in &reports {
                    s.push_str(&format!(
                        "suite {}: {}\n",
                        r.suite,
                        if r.pass { "pass" } else { "FAIL" }
                    ));
                    for c in &r.checks {
                        let mark = if c.pass { "ok  " } else { "FAIL" };
                        let slack = c
                            .slack
                            .map(|v| format!(" (slack {v:.3e})"))
                            .unwrap_or_default();
                        s.push_str(&format!("  {mark} {}: {}{slack}\n", c.name, c.detail));
                    }
                }
                s
            });
            Ok(if pass { 0 } else { EXIT_FAILED_CHECK })
        }
    }
}

/// A nonnegative value is an element code; −c is the negative of code c.
fn signed_elem(field: &FieldSpec, c: i64) -> Result<Elem> {
    let code = u32::try_from(c.unsigned_abs())
        .map_err(|_| Error::usage(format!("coefficient {c} is out of range")))?;
    let e = field.elem(code)?;
    Ok(if c < 0 { field.neg(e) } else { e })
}

fn analysis_text(r: &analysis::AnalysisReport) -> String {
    let mut s = String::new();
    s.push_str(&r.canonical);
    s.push_str(&format!("rank: {}\n", r.rank));
    match r.redundancy_witness {
        Some((i, j)) => s.push_str(&format!("irredundant: no (x{i} = x{j})\n")),
        None => s.push_str("irredundant: yes\n"),
    }
    s.push_str(&format!("s(L) = {}, c(L) = {}\n", r.s, r.c));
    s.push_str(&format!("critical sets: {}\n", r.critical_sets.len()));
    for c in &r.critical_sets {
        let vars: Vec<String> = c.variables.iter().map(|v| format!("x{v}")).collect();
        let rows: Vec<String> = c.system.rows.iter().map(|row| format!("{row:?}")).collect();
        s.push_str(&format!(
            "  {{{}}} m_B = {} rows {}\n",
            vars.join(", "),
            c.m_b,
            rows.join(" ")
        ));
    }
    s.push_str(&format!(
        "classification: {} ({})\n",
        serde_json::to_value(r.classification.verdict)
            .expect("serializable")
            .as_str()
            .unwrap_or(""),
        r.classification.reason
    ));
    s
}
