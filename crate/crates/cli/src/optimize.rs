use cvtele_core::{
    classical_benchmark, log_negativity, optimal_fidelity, tmss_fidelity, tmss_optimal_gain,
    Branch, Endpoint, InputEnsemble, ResourceOutcome,
};
use serde::{Deserialize, Serialize};

use crate::args::Format;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResourceReport {
    Finite {
        a: f64,
        b: f64,
        c: f64,
        entanglement: f64,
        energy: f64,
    },
    /// The optimum needs infinite resource energy.
    Divergent { endpoint: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmssReport {
    pub gain: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub tau: f64,
    pub y: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub r: f64,
    pub lambda: f64,
    pub tau_opt: f64,
    pub y_opt: f64,
    pub fidelity: f64,
    pub branch: String,
    pub resource: ResourceReport,
    pub tmss: TmssReport,
    pub classical: ClassicalReport,
}

fn endpoint_tag(e: Endpoint) -> String {
    match e {
        Endpoint::Attenuator => "attenuator".into(),
        Endpoint::Amplifier => "amplifier".into(),
    }
}

pub fn optimize(r: f64, lambda: f64) -> Result<OptimizeReport> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(CliError::Args(format!("r must be finite and >= 0, got {r}")));
    }
    let ens = InputEnsemble::new(lambda)?;
    let opt = optimal_fidelity(r, ens)?;
    let resource = match opt.resource {
        ResourceOutcome::Finite(res) => ResourceReport::Finite {
            a: res.sf.a(),
            b: res.sf.b(),
            c: res.sf.c(),
            entanglement: log_negativity(&res.sf.covariance())?,
            energy: res.energy,
        },
        ResourceOutcome::Divergent { endpoint } => ResourceReport::Divergent {
            endpoint: endpoint_tag(endpoint),
        },
    };
    let cl = classical_benchmark(ens);
    Ok(OptimizeReport {
        r,
        lambda,
        tau_opt: opt.tau_opt,
        y_opt: opt.y_opt,
        fidelity: opt.fidelity,
        branch: match opt.branch {
            Branch::AttenuatorBranch => "attenuator_branch".into(),
            Branch::InteriorBranch => "interior_branch".into(),
        },
        resource,
        tmss: TmssReport {
            gain: tmss_optimal_gain(r, ens),
            fidelity: tmss_fidelity(r, ens),
        },
        classical: ClassicalReport {
            tau: cl.tau_opt,
            y: cl.y_opt,
            fidelity: cl.fidelity,
        },
    })
}

pub const CSV_COLUMNS: [&str; 17] = [
    "r",
    "lambda",
    "tau_opt",
    "y_opt",
    "fidelity",
    "branch",
    "resource",
    "a",
    "b",
    "c",
    "entanglement",
    "energy",
    "tmss_gain",
    "tmss_fidelity",
    "classical_tau",
    "classical_y",
    "classical_fidelity",
];

pub fn render(report: &OptimizeReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let s = |x: f64| x.to_string();
            let (kind, a, b, c, e, n) = match &report.resource {
                ResourceReport::Finite {
                    a,
                    b,
                    c,
                    entanglement,
                    energy,
                } => ("finite".to_owned(), s(*a), s(*b), s(*c), s(*entanglement), s(*energy)),
                ResourceReport::Divergent { endpoint } => (
                    format!("divergent_{endpoint}"),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "inf".to_owned(),
                ),
            };
            let row = [
                s(report.r),
                s(report.lambda),
                s(report.tau_opt),
                s(report.y_opt),
                s(report.fidelity),
                report.branch.clone(),
                kind,
                a,
                b,
                c,
                e,
                n,
                s(report.tmss.gain),
                s(report.tmss.fidelity),
                s(report.classical.tau),
                s(report.classical.y),
                s(report.classical.fidelity),
            ];
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(vec![]);
            w.write_record(CSV_COLUMNS)?;
            w.write_record(row)?;
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_values() {
        let rep = optimize(0.5, 0.5).unwrap();
        assert!((rep.fidelity - 0.8379).abs() < 1e-4);
        assert!(rep.tmss.fidelity < rep.fidelity);
        assert!((rep.classical.fidelity - 0.6).abs() < 1e-15);
        assert!(matches!(rep.resource, ResourceReport::Finite { .. }));
    }

    #[test]
    fn csv_has_one_row() {
        let rep = optimize(3.0, 0.01).unwrap();
        let text = render(&rep, Format::Csv).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert!(lines[1].contains("divergent_attenuator"));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(optimize(-1.0, 1.0).is_err());
        assert!(optimize(0.5, 0.0).is_err());
    }
}
