use cvtele_core::{
    apply, bk_output, classify, heisenberg_oracle, induced_pi_channel, log_negativity,
    mean_energy, optimal_resource, sampling, tmss, tmss_squeezing_for_channel, ChannelClass,
    Gain, GaussianState, PhaseInsensitiveChannel, TwoModeStandardForm, DEFAULT_TOL,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::args::{Format, ResourceKind, SimulateArgs};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub tau: f64,
    pub y: f64,
    pub class: ChannelClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub resource_kind: String,
    /// TMSS squeezing `r'`, or the `r` of an `E_N = 2r` optimal resource.
    pub r: f64,
    pub gain: f64,
    pub channel: ChannelReport,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub entanglement: f64,
    pub energy: f64,
    /// Max-abs difference between the block formula and the Heisenberg-picture
    /// map over the probe states.
    pub oracle_residual: f64,
    /// Max-abs difference between teleporting a probe and sending it through
    /// the induced channel.
    pub channel_residual: f64,
    pub probes: usize,
    pub seed: u64,
}

fn gain_or(g: Option<f64>, default: f64) -> Result<Gain> {
    Ok(Gain::new(g.unwrap_or(default))?)
}

/// Resource, its entanglement parameter, and the gain to use.
fn resolve(args: &SimulateArgs) -> Result<(TwoModeStandardForm, f64, Gain)> {
    match args.resource {
        ResourceKind::Tmss => match (args.r, args.tau, args.y) {
            (Some(r), tau, None) => {
                let g = gain_or(args.g, tau.map_or(1.0, f64::sqrt))?;
                Ok((tmss(r)?, r, g))
            }
            (None, Some(tau), Some(y)) => {
                let ch = PhaseInsensitiveChannel::completely_positive(tau, y)?;
                let r = tmss_squeezing_for_channel(&ch)?;
                if r.is_infinite() {
                    return Err(CliError::Args(
                        "the identity channel needs infinite squeezing".into(),
                    ));
                }
                Ok((tmss(r)?, r, gain_or(args.g, tau.sqrt())?))
            }
            _ => Err(CliError::Args(
                "tmss needs --r (optionally with --tau), or --tau and --y".into(),
            )),
        },
        ResourceKind::Optimal => match (args.tau, args.r, args.y) {
            (Some(tau), Some(r), None) => {
                let res = optimal_resource(tau, r)?;
                Ok((res.sf, r, gain_or(args.g, tau.sqrt())?))
            }
            _ => Err(CliError::Args("optimal needs --tau and --r (and no --y)".into())),
        },
    }
}

fn max_abs_diff(a: &GaussianState, b: &GaussianState) -> f64 {
    let dv = (a.covariance().as_matrix() - b.covariance().as_matrix()).amax();
    let dd = (a.displacement().as_vector() - b.displacement().as_vector()).amax();
    dv.max(dd)
}

pub fn simulate(args: &SimulateArgs) -> Result<SimulateReport> {
    let (sf, r, g) = resolve(args)?;
    let v = sf.covariance();
    let ch = induced_pi_channel(&sf, g);

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (mut oracle, mut channel) = (0.0f64, 0.0f64);
    for k in 0..args.probes {
        let coh = sampling::coherent(&mut rng, 3.0);
        let input = if k % 2 == 0 {
            coh
        } else {
            let cov = sampling::physical_covariance(&mut rng, 1, 1.0, 2.0);
            GaussianState::new(coh.displacement().clone(), cov)?
        };
        let out = bk_output(&v, g, &input)?;
        oracle = oracle.max(max_abs_diff(&out, &heisenberg_oracle(&v, g, &input)?));
        channel = channel.max(max_abs_diff(&out, &apply(&ch, &input, &[0])?));
    }

    Ok(SimulateReport {
        resource_kind: match args.resource {
            ResourceKind::Tmss => "tmss".into(),
            ResourceKind::Optimal => "optimal".into(),
        },
        r,
        gain: g.value(),
        channel: ChannelReport {
            tau: ch.tau(),
            y: ch.y(),
            class: classify(&ch, DEFAULT_TOL),
        },
        a: sf.a(),
        b: sf.b(),
        c: sf.c(),
        entanglement: log_negativity(&v)?,
        energy: mean_energy(&v),
        oracle_residual: oracle,
        channel_residual: channel,
        probes: args.probes,
        seed: args.seed,
    })
}

pub const CSV_COLUMNS: [&str; 14] = [
    "resource_kind",
    "r",
    "gain",
    "tau",
    "y",
    "class",
    "a",
    "b",
    "c",
    "entanglement",
    "energy",
    "oracle_residual",
    "channel_residual",
    "probes",
];

pub fn render(report: &SimulateReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let class = serde_json::to_value(report.channel.class)?;
            let row = [
                report.resource_kind.clone(),
                report.r.to_string(),
                report.gain.to_string(),
                report.channel.tau.to_string(),
                report.channel.y.to_string(),
                class.as_str().unwrap_or_default().to_owned(),
                report.a.to_string(),
                report.b.to_string(),
                report.c.to_string(),
                report.entanglement.to_string(),
                report.energy.to_string(),
                report.oracle_residual.to_string(),
                report.channel_residual.to_string(),
                report.probes.to_string(),
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
