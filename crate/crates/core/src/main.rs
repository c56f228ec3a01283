use std::io::Read;
use std::time::Instant;

use clap::Parser;

use mulchar::cli::{exit_code_for, parse_problem, run_problem, run_verify};

/// Multiplicative character calculator: evaluates odd characters of Loday
/// symbols over Fredholm modules and runs the seeded identity suites.
#[derive(Parser, Debug)]
#[command(name = "mulchar", version)]
struct Args {
    /// Problem document (JSON file, or `-` for stdin).
    #[arg(long)]
    spec: Option<String>,

    /// Run an identity suite directly instead of reading a document.
    #[arg(long)]
    verify: Option<String>,

    /// Seed for the random instances in the identity suites.
    #[arg(long, default_value_t = 2024)]
    seed: u64,

    /// Base tolerance for residual checks.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Worker threads (accepted for interface stability; evaluation is
    /// sequential so reports stay byte-identical).
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Add wall-clock timing to the report (breaks byte-identical output).
    #[arg(long, default_value_t = false)]
    timing: bool,
}

fn main() {
    let args = Args::parse();
    let _ = args.threads;
    let start = Instant::now();

    let outcome = if let Some(suite) = &args.verify {
        run_verify(suite, args.seed, args.tol).map(|r| {
            let code = if r.suites.as_ref().unwrap().iter().all(|s| s.passed) {
                0
            } else {
                1
            };
            (r, code)
        })
    } else if let Some(path) = &args.spec {
        read_input(path)
            .and_then(|text| parse_problem(&text))
            .and_then(|spec| run_problem(&spec, args.seed, args.tol))
    } else {
        eprintln!("error: pass --spec <file|-> or --verify <suite>");
        std::process::exit(64);
    };

    match outcome {
        Ok((mut report, code)) => {
            if args.timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            std::process::exit(code);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code_for(&err));
        }
    }
}

fn read_input(path: &str) -> mulchar::error::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| mulchar::error::Error::Parse(e.to_string()))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| {
            mulchar::error::Error::Parse(format!("cannot read {path}: {e}"))
        })
    }
}
