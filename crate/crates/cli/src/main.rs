use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pluritop::hmops::bh_required_degree;
use pluritop::json::{
    classification_to_json, operator_from_json, operator_to_json, symbol_from_json, symbol_to_json,
};
use pluritop::scalar::FLOAT_FROBENIUS_THRESHOLD;
use pluritop::space::{Space, SpaceParams};
use pluritop::suite::{run_suite, SuiteConfig, SuiteReport};
use pluritop::toeplitz::{classify, recover_symbol, toeplitz_op, Verdict};
use pluritop::{Error, Exact, Float, Mode, Scalar};

const EXIT_OK: u8 = 0;
const EXIT_IDENTITY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_TOEPLITZ: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pluritop",
    version,
    about = "Toeplitz and Brown-Halmos checks on finite sections of H_m of the unit ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite and print a JSON report.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Trusted degree window.
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Build the Toeplitz matrix of a symbol file.
    Toeplitz {
        #[arg(long, value_name = "FILE")]
        symbol: PathBuf,
        #[arg(long)]
        m: usize,
        /// Input window of the emitted section.
        #[arg(long)]
        degree: usize,
        /// Expected dimension; must agree with the file when given.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the Brown-Halmos test and symbol recovery on an operator file.
    Classify {
        #[arg(long, value_name = "FILE")]
        operator: PathBuf,
        /// Trusted window; defaults to the largest one the file supports.
        #[arg(long)]
        degree: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Apply the recovery formulas to an operator file without testing it.
    Recover {
        #[arg(long, value_name = "FILE")]
        operator: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "exact")]
    mode: Mode,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Outcome {
    body: Value,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match worker_pool() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let output = match &cli.command {
        Command::Verify { common, .. }
        | Command::Toeplitz { common, .. }
        | Command::Classify { common, .. }
        | Command::Recover { common, .. } => common.output.clone(),
    };
    let result = pool.install(|| dispatch(&cli.command));
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.body, output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(outcome.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// Honors `PLURITOP_THREADS`; otherwise rayon picks the size.
fn worker_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("PLURITOP_THREADS") {
        let n: usize =
            raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
                format!("PLURITOP_THREADS must be a positive integer, got `{raw}`")
            })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Verify {
            n,
            m,
            degree,
            seed,
            common,
        } => {
            let cfg = SuiteConfig::new(*n, *m, *degree, *seed)?;
            let report = match common.mode {
                Mode::Exact => run_suite::<Exact>(&cfg)?,
                Mode::Float => run_suite::<Float>(&cfg)?,
            };
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_IDENTITY_FAILED
            };
            for c in report.failures() {
                eprintln!("FAILED {} (frobenius_sq = {})", c.name, c.frobenius_sq);
            }
            Ok(Outcome {
                body: verify_json(&report),
                code,
            })
        }
        Command::Toeplitz {
            symbol,
            m,
            degree,
            n,
            common,
        } => {
            let v = read_json(symbol)?;
            let body = match common.mode {
                Mode::Exact => toeplitz_cmd::<Exact>(&v, *n, *m, *degree)?,
                Mode::Float => toeplitz_cmd::<Float>(&v, *n, *m, *degree)?,
            };
            Ok(Outcome {
                body,
                code: EXIT_OK,
            })
        }
        Command::Classify {
            operator,
            degree,
            common,
        } => {
            let v = read_json(operator)?;
            match common.mode {
                Mode::Exact => classify_cmd::<Exact>(&v, *degree),
                Mode::Float => classify_cmd::<Float>(&v, *degree),
            }
        }
        Command::Recover { operator, common } => {
            let v = read_json(operator)?;
            let body = match common.mode {
                Mode::Exact => symbol_to_json(&recover_symbol(&operator_from_json::<Exact>(&v)?)?),
                Mode::Float => symbol_to_json(&recover_symbol(&operator_from_json::<Float>(&v)?)?),
            };
            Ok(Outcome {
                body,
                code: EXIT_OK,
            })
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Lib(Error::Parse {
            field: format!("<json line {} column {}>", e.line(), e.column()),
            message: e.to_string(),
        })
    })
}

fn emit(body: &Value, output: Option<&Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(body).expect("values always serialize");
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn toeplitz_cmd<S: Scalar>(
    v: &Value,
    n: Option<usize>,
    m: usize,
    degree: usize,
) -> Result<Value, Failure> {
    let s = symbol_from_json::<S>(v)?;
    if let Some(n) = n {
        if n != s.n() {
            return Err(Failure::Lib(Error::Parse {
                field: "n".into(),
                message: format!("symbol has {} variables but --n is {n}", s.n()),
            }));
        }
    }
    let top = degree + s.g.degree().unwrap_or(0);
    let space = Space::new(SpaceParams::new(s.n(), m, top, S::MODE)?)?;
    Ok(operator_to_json(&toeplitz_op(&s, &space, degree)?))
}

fn classify_cmd<S: Scalar>(v: &Value, degree: Option<usize>) -> Result<Outcome, Failure> {
    let t = operator_from_json::<S>(v)?;
    let d = match degree {
        Some(d) => d,
        None => largest_trusted_window(&t)?,
    };
    let report = classify(&t, d)?;
    let code = match report.verdict {
        Verdict::ToeplitzPluriharmonic => EXIT_OK,
        Verdict::NotToeplitz => EXIT_NOT_TOEPLITZ,
    };
    let mut body = classification_to_json(&report);
    body["trusted_degree"] = d.into();
    Ok(Outcome { body, code })
}

fn largest_trusted_window<S: Scalar>(
    t: &pluritop::opcore::GradedOperator<S>,
) -> Result<usize, Failure> {
    let top = t.space().max_degree();
    (0..t.d_in())
        .rev()
        .find(|&d| bh_required_degree(t, d) <= top)
        .ok_or_else(|| {
            Failure::Lib(Error::WindowMismatch(format!(
                "input window {} leaves no trusted degree for the Brown-Halmos test (needs at least 1)",
                t.d_in()
            )))
        })
}

fn verify_json(report: &SuiteReport) -> Value {
    let cfg = &report.config;
    let threshold = match report.mode {
        Mode::Exact => "0".to_string(),
        Mode::Float => format!("{FLOAT_FROBENIUS_THRESHOLD:e}"),
    };
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "group": c.group.as_str(),
                "expect": if c.expect_zero { "zero" } else { "nonzero" },
                "is_zero": c.is_zero,
                "frobenius_sq": c.frobenius_sq,
                "passed": c.passed(),
            })
        })
        .collect();
    let failed = report.failures().count();
    json!({
        "config": {
            "n": cfg.n,
            "m": cfg.m,
            "degree": cfg.degree,
            "seed": cfg.seed,
            "mode": report.mode.as_str(),
            "workspace_degree": report.workspace,
            "cases": cfg.cases,
            "symbol_degree": cfg.symbol_degree,
            "kernel_pairs": cfg.kernel_pairs,
            "threshold": threshold,
        },
        "checks": checks,
        "summary": { "total": report.checks.len(), "failed": failed },
        "passed": failed == 0,
    })
}
