//! `twinmorse --suite NAME [options]`: runs one verification suite and writes its JSON report.
//!
//! Exit codes: 0 all cases pass, 1 some case fails, 2 usage error, 3 report could not be written.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use num_traits::Signed;

use twinmorse::exactgeom::parse_q;
use twinmorse::suites::{run_suite, run_suite_timed, Status, SuiteConfig, SuiteError};

#[derive(Parser, Debug)]
#[command(name = "twinmorse", version, about = "Exact checks on thin twin apartments, horizontal links and hemisphere complexes")]
struct Args {
    /// zonotopes, horolinks, hemispheres, morse or twin-metric
    #[arg(long)]
    suite: String,
    /// Affine type (A1, A2, C2, G2) or a product such as A1xA2 for horolinks
    #[arg(long = "type")]
    kind: Option<String>,
    /// Window radius, a positive rational such as 3 or 5/2
    #[arg(long)]
    radius: Option<String>,
    /// Field size for the flag buildings
    #[arg(long)]
    q: Option<u32>,
    /// Ambient dimension for the zonotope suite
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    /// Where to write the JSON report; stdout when absent
    #[arg(long)]
    report: Option<PathBuf>,
    /// Do not enlarge the window for depth searches
    #[arg(long)]
    strict_window: bool,
    /// Record wall time in the report (makes reports differ between runs)
    #[arg(long)]
    timing: bool,
}

fn config(a: &Args) -> Result<SuiteConfig, String> {
    let radius = match &a.radius {
        None => None,
        Some(s) => match parse_q(s) {
            Some(r) if r.is_positive() => Some(r),
            _ => return Err(format!("--radius must be a positive rational, got `{s}`")),
        },
    };
    Ok(SuiteConfig {
        kind: a.kind.clone(),
        radius,
        q: a.q,
        dim: a.dim,
        seed: a.seed,
        trials: a.trials,
        strict_window: a.strict_window,
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let run = if args.timing { run_suite_timed } else { run_suite };
    let report = match run(&args.suite, &cfg) {
        Ok(r) => r,
        Err(SuiteError::Usage(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(SuiteError::Compute(e)) => {
            eprintln!("error while running {}: {e}", args.suite);
            return ExitCode::from(1);
        }
    };
    for c in &report.cases {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
            Status::ExpectedFailure => "XFAIL",
        };
        eprintln!("{tag:5} {} ({} checks, {} violations)", c.name, c.checked, c.violations);
    }
    let text = report.to_json_string();
    let written = match &args.report {
        Some(p) => std::fs::write(p, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(3);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
