//! Command-line experiments on top of `cvtele-core`: diagram data, optimal
//! channels, resource simulation and the verification suites.

#![forbid(unsafe_code)]

pub mod args;
pub mod diagram;
pub mod error;
pub mod ledger;
pub mod optimize;
pub mod simulate;
pub mod verify;

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use args::{Cli, Command, Format};
pub use diagram::{cmd_diagram, DiagramGridSpec};
pub use error::{CliError, Result};
pub use ledger::RunRecord;

/// Result of one command: the ledger record, text destined for standard
/// output, and whether every requested computation succeeded.
#[derive(Debug)]
pub struct Outcome {
    pub record: RunRecord,
    pub stdout: Option<String>,
    pub success: bool,
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        other => Map::from_iter([("value".to_owned(), other)]),
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Writes `text` to `out` when given, otherwise hands it back for stdout.
fn emit(out: Option<&Path>, text: String) -> Result<(Option<String>, Vec<String>)> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Write {
                path: path.to_owned(),
                source,
            })?;
            Ok((None, vec![path.display().to_string()]))
        }
        None => Ok((Some(text), vec![])),
    }
}

/// Parses `CVTELE_THREADS`; `None` leaves the pool size to rayon.
pub fn thread_count(value: Option<&str>) -> Result<Option<usize>> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Threads(s.to_owned())),
        },
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Diagram(a) => {
            let spec = DiagramGridSpec {
                r: a.r,
                lambda: a.lambda,
                tau_range: [a.tau_min, a.tau_max],
                y_range: [a.y_min, a.y_max],
                resolution: a.resolution,
                tol: a.tol,
            };
            let record = cmd_diagram(&spec, &a.out)?;
            Ok(Outcome {
                record,
                stdout: None,
                success: true,
            })
        }
        Command::Optimize(a) => {
            let report = optimize::optimize(a.r, a.lambda)?;
            let (stdout, outputs) = emit(a.out.as_deref(), optimize::render(&report, a.format)?)?;
            let params = json!({ "r": a.r, "lambda": a.lambda, "format": format_name(a.format) });
            Ok(Outcome {
                record: RunRecord::new("optimize", object(params), outputs),
                stdout,
                success: true,
            })
        }
        Command::Simulate(a) => {
            let report = simulate::simulate(a)?;
            let (stdout, outputs) = emit(a.out.as_deref(), simulate::render(&report, a.format)?)?;
            let params = json!({
                "resource": report.resource_kind,
                "r": a.r,
                "tau": a.tau,
                "y": a.y,
                "g": a.g,
                "seed": a.seed,
                "probes": a.probes,
                "format": format_name(a.format),
            });
            Ok(Outcome {
                record: RunRecord::new("simulate", object(params), outputs),
                stdout,
                success: true,
            })
        }
        Command::Verify(a) => {
            let report = verify::run_suite(a.suite, a.seed);
            let text = serde_json::to_string_pretty(&report)? + "\n";
            let (stdout, outputs) = emit(a.out.as_deref(), text)?;
            let params = json!({ "suite": verify::suite_name(a.suite), "seed": a.seed });
            Ok(Outcome {
                record: RunRecord::new("verify", object(params), outputs),
                stdout,
                success: report.passed,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_env_parsing() {
        assert_eq!(thread_count(None).unwrap(), None);
        assert_eq!(thread_count(Some("4")).unwrap(), Some(4));
        assert!(thread_count(Some("0")).is_err());
        assert!(thread_count(Some("many")).is_err());
    }
}
