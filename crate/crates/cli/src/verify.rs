//! Seeded oracle and property suites behind `cvtele verify`.

use cvtele_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::args::Suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    /// Strict: the residual is a margin that must be negative.
    #[serde(rename = "<")]
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub samples: usize,
    pub residual: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub library_version: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Runner {
    seed: u64,
    checks: Vec<Check>,
}

impl Runner {
    /// Each random check draws from its own stream, so a check sees the same
    /// samples whichever suites run alongside it.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn record(&mut self, suite: &str, name: &str, samples: usize, residual: f64, relation: Relation, tolerance: f64) {
        let passed = match relation {
            Relation::AtMost => residual <= tolerance,
            Relation::Below => residual < tolerance,
        };
        self.checks.push(Check {
            suite: suite.into(),
            name: name.into(),
            samples,
            residual,
            relation,
            tolerance,
            passed,
        });
    }
}

/// Worst value of `f` over the samples; NaN dominates so failures surface.
fn worst(values: impl IntoIterator<Item = f64>) -> (f64, usize) {
    let mut n = 0;
    let mut w = f64::NEG_INFINITY;
    for v in values {
        n += 1;
        if v.is_nan() || v > w {
            w = v;
        }
        if w.is_nan() {
            break;
        }
    }
    (w, n)
}

fn ens(l: f64) -> InputEnsemble {
    InputEnsemble::new(l).expect("suite ensembles are positive")
}

fn max_abs_diff(a: &GaussianState, b: &GaussianState) -> f64 {
    let dv = (a.covariance().as_matrix() - b.covariance().as_matrix()).amax();
    let dd = (a.displacement().as_vector() - b.displacement().as_vector()).amax();
    dv.max(dd)
}

fn half_of_tmss(ch: &PhaseInsensitiveChannel, s: f64) -> f64 {
    let state = GaussianState::centered(tmss(s).unwrap().covariance()).unwrap();
    let out = apply(ch, &state, &[1]).unwrap();
    log_negativity(out.covariance()).unwrap_or(f64::NAN)
}

fn oracles(run: &mut Runner) {
    const S: &str = "oracles";

    let mut rng = run.rng(1);
    let (res, n) = worst((0..2000).map(|k| {
        let v = sampling::physical_covariance(&mut rng, 2, 1.0, 1.5);
        let g = Gain::new(0.01 + 1.99 * rng.random::<f64>()).unwrap();
        let coh = sampling::coherent(&mut rng, 3.0);
        let input = if k % 2 == 0 {
            coh
        } else {
            let cov = sampling::physical_covariance(&mut rng, 1, 1.0, 2.0);
            GaussianState::new(coh.displacement().clone(), cov).unwrap()
        };
        match (bk_output(&v, g, &input), heisenberg_oracle(&v, g, &input)) {
            (Ok(a), Ok(b)) => max_abs_diff(&a, &b),
            _ => f64::NAN,
        }
    }));
    run.record(S, "teleportation_map", n, res, Relation::AtMost, 1e-12);

    let spec = QuadratureSpec::default();
    let mut rng = run.rng(2);
    let mut points = vec![];
    for &l in &[0.05, 1.0, 6.0] {
        for i in 0..6 {
            let tau = 0.6 * i as f64;
            for k in 0..4 {
                points.push((tau, (1.0 - tau).abs() + 0.75 * k as f64, l));
            }
        }
    }
    for _ in 0..20 {
        let ch = sampling::cp_channel(&mut rng, 3.0, 3.0);
        points.push((ch.tau(), ch.y(), 0.01 + 10.0 * rng.random::<f64>()));
    }
    let (res, n) = worst(points.iter().map(|&(tau, y, l)| {
        match (avg_fidelity(tau, y, ens(l)), avg_fidelity_numeric(tau, y, ens(l), &spec)) {
            (Ok(a), Ok(b)) => (a - b).abs(),
            _ => f64::NAN,
        }
    }));
    run.record(S, "fidelity_quadrature", n, res, Relation::AtMost, 1e-8);

    let mut rng = run.rng(3);
    let (res, n) = worst((0..50).map(|_| {
        let ch = sampling::cp_channel(&mut rng, 3.0, 3.0);
        (half_of_tmss(&ch, 10.0) - choi_log_negativity(&ch)).abs()
    }));
    run.record(S, "choi_limit", n, res, Relation::AtMost, 1e-3);

    let mut grid = vec![];
    for i in 0..21 {
        let tau = if i == 20 { 1.0 } else { 0.05 + 0.15 * i as f64 };
        let (lo, hi) = ((1.0 - tau).abs(), 1.0 + tau);
        for j in 0..20 {
            grid.push((tau, lo + (hi - lo) * (j as f64 + 0.5) / 20.0));
        }
    }
    let (res, n) = worst(grid.iter().map(|&(tau, y)| {
        let ch = PhaseInsensitiveChannel::new(tau, y).unwrap();
        let Ok(rp) = tmss_squeezing_for_channel(&ch) else {
            return f64::NAN;
        };
        let sim = induced_pi_channel(&tmss(rp).unwrap(), Gain::new(tau.sqrt()).unwrap());
        (sim.y() - y).abs().max((sim.tau() - tau).abs())
    }));
    run.record(S, "tmss_squeezing_round_trip", n, res, Relation::AtMost, 1e-10);

    let mut rng = run.rng(4);
    let pairs: Vec<_> = (0..50)
        .map(|_| {
            let r = 0.05 + 2.0 * rng.random::<f64>();
            let (lo, hi) = (r.tanh(), 1.0 / r.tanh());
            (lo + (hi - lo) * (0.001 + 0.998 * rng.random::<f64>()), r)
        })
        .collect();
    let built: Vec<_> = pairs.iter().map(|&(tau, r)| (optimal_resource(tau, r), tau, r)).collect();
    let (res, n) = worst(built.iter().map(|(res, _, r)| match res {
        Ok(res) => log_negativity(&res.sf.covariance()).map_or(f64::NAN, |e| (e - 2.0 * r).abs()),
        Err(_) => f64::NAN,
    }));
    run.record(S, "optimal_resource_entanglement", n, res, Relation::AtMost, 1e-8);
    let (res, n) = worst(built.iter().map(|(res, _, _)| match res {
        Ok(res) => symplectic_eigenvalues(&res.sf.covariance()).map_or(f64::NAN, |nu| (nu[0] - 1.0).abs()),
        Err(_) => f64::NAN,
    }));
    run.record(S, "optimal_resource_unit_eigenvalue", n, res, Relation::AtMost, 1e-8);
    let (res, n) = worst(built.iter().map(|(res, tau, r)| match res {
        Ok(res) => (res.channel().y() - min_noise_for_entanglement(*tau, *r)).abs(),
        Err(_) => f64::NAN,
    }));
    run.record(S, "optimal_resource_noise", n, res, Relation::AtMost, 1e-10);

    let cases = [(0.5, 0.5), (0.0, 1.0), (1.0, 0.1)];
    let (res, n) = worst(cases.iter().map(|&(r, l)| {
        match (grid_maximize(r, ens(l), 1e-3), optimal_fidelity(r, ens(l))) {
            (Ok(g), Ok(o)) => (g.fidelity - o.fidelity).abs(),
            _ => f64::NAN,
        }
    }));
    run.record(S, "grid_optimizer", n, res, Relation::AtMost, 1e-4);
}

fn inequalities(run: &mut Runner) {
    const S: &str = "inequalities";
    let mut grid = vec![];
    for i in 1..=15 {
        for j in 0..15 {
            grid.push((3.0 * i as f64 / 15.0, 0.01 * 1000f64.powf(j as f64 / 14.0)));
        }
    }
    let vals: Vec<_> = grid
        .iter()
        .map(|&(r, l)| {
            let opt = optimal_fidelity(r, ens(l)).map_or(f64::NAN, |o| o.fidelity);
            (opt, tmss_fidelity(r, ens(l)), classical_benchmark(ens(l)).fidelity)
        })
        .collect();
    let (res, n) = worst(vals.iter().map(|&(o, t, _)| t - o));
    run.record(S, "tmss_below_optimal", n, res, Relation::Below, 0.0);
    let (res, n) = worst(vals.iter().map(|&(_, t, c)| c - t));
    run.record(S, "classical_below_tmss", n, res, Relation::Below, 0.0);

    let lambdas: Vec<f64> = (0..15).map(|j| 0.01 * 1000f64.powf(j as f64 / 14.0)).collect();
    let (res, n) = worst(lambdas.iter().map(|&l| {
        let o = optimal_fidelity(0.0, ens(l)).map_or(f64::NAN, |o| o.fidelity);
        let c = (1.0 + l) / (2.0 + l);
        (o - c).abs().max((tmss_fidelity(0.0, ens(l)) - c).abs())
    }));
    run.record(S, "saturation_at_zero_entanglement", n, res, Relation::AtMost, 1e-9);

    let (res, n) = worst([0.1, 0.5, 1.0, 2.0].iter().map(|&r: &f64| {
        let o = optimal_fidelity(r, ens(1e-8)).map_or(f64::NAN, |o| o.fidelity);
        (o - unit_gain_limit(r)).abs()
    }));
    run.record(S, "unit_gain_limit", n, res, Relation::AtMost, 1e-6);

    let (res, n) = worst([0.3, 0.8, 1.5, 2.5].iter().map(|&r: &f64| {
        // Solve tanh r = e^{2r}/(e^r + λ cosh r)² for λ and compare both branches there.
        let th = r.tanh();
        let l = (r.exp() / th.sqrt() - r.exp()) / r.cosh();
        let first = l / (l + (1.0 - th.sqrt()).powi(2));
        let second = r.exp() * (1.0 + l + th) / (2.0 * r.exp() + l * r.cosh());
        (first - second).abs()
    }));
    run.record(S, "branch_continuity", n, res, Relation::AtMost, 1e-9);

    let (res, n) = worst(lambdas.iter().flat_map(|&l| {
        (0..60).map(move |k| {
            let f = |r: f64| optimal_fidelity(r, ens(l)).map_or(f64::NAN, |o| o.fidelity);
            f(0.05 * k as f64) - f(0.05 * (k + 1) as f64)
        })
    }));
    run.record(S, "optimal_monotone_in_r", n, res, Relation::AtMost, 0.0);
}

fn regions(run: &mut Runner) {
    const S: &str = "regions";

    let mut mismatches = 0usize;
    let mut n = 0;
    for i in 0..=60 {
        let tau = 0.05 * i as f64;
        for j in 0..=60 {
            let y = 0.05 * j as f64 + 0.013;
            let ch = PhaseInsensitiveChannel::new(tau, y).unwrap();
            let gen = ch.to_general();
            let general = is_cp_general(gen.gain(), gen.noise(), DEFAULT_TOL).unwrap_or(!pi_is_cp(&ch));
            mismatches += usize::from(general != pi_is_cp(&ch));
            n += 1;
        }
    }
    run.record(S, "cp_scalar_vs_general", n, mismatches as f64, Relation::AtMost, 0.0);

    let mut rng = run.rng(5);
    let (res, n) = worst((0..60).flat_map(|_| {
        let tau = 3.0 * rng.random::<f64>();
        let y = 1.0 + tau + 2.0 * rng.random::<f64>();
        let ch = PhaseInsensitiveChannel::new(tau, y).unwrap();
        [0.5, 2.0, 5.0].map(|s| half_of_tmss(&ch, s))
    }));
    run.record(S, "entanglement_breaking_outputs_separable", n, res, Relation::AtMost, 1e-9);

    let mut samples = vec![];
    for &r in &[0.1, 0.5, 1.0, 2.0] {
        for i in 0..=12 {
            let tau = 0.25 * i as f64;
            let y = min_noise_for_entanglement(tau, r).max((1.0 - tau).abs());
            for k in 0..=10 {
                samples.push((r, tau, y, 0.5 * k as f64));
            }
        }
    }
    let (res, n) = worst(samples.iter().map(|&(r, tau, y, s)| {
        half_of_tmss(&PhaseInsensitiveChannel::new(tau, y).unwrap(), s) - 2.0 * r
    }));
    run.record(S, "accessible_entanglement_bound", n, res, Relation::AtMost, 1e-9);

    let expected = [
        ((0.5, 0.5), ChannelClass::QuantumLimitedAttenuator),
        ((2.0, 1.0), ChannelClass::QuantumLimitedAmplifier),
        ((1.0, 0.0), ChannelClass::Identity),
        ((1.0, 2.0), ChannelClass::EntanglementBreaking),
        ((0.5, 0.4), ChannelClass::Unphysical),
        ((1.0, 1.0), ChannelClass::Generic),
    ];
    let wrong = expected
        .iter()
        .filter(|&&((t, y), c)| classify(&PhaseInsensitiveChannel::new(t, y).unwrap(), DEFAULT_TOL) != c)
        .count();
    run.record(S, "classification_examples", expected.len(), wrong as f64, Relation::AtMost, 0.0);

    let mut rng = run.rng(6);
    let (res, n) = worst((0..2000).map(|_| {
        let sf = sampling::standard_form(&mut rng, 6.0);
        let g = Gain::new(0.01 + 1.99 * rng.random::<f64>()).unwrap();
        let ch = induced_pi_channel(&sf, g);
        (1.0 - ch.tau()).abs() - ch.y()
    }));
    run.record(S, "induced_channels_completely_positive", n, res, Relation::AtMost, DEFAULT_TOL);
}

pub fn run_suite(suite: Suite, seed: u64) -> VerifyReport {
    let mut run = Runner { seed, checks: vec![] };
    if matches!(suite, Suite::All | Suite::Oracles) {
        oracles(&mut run);
    }
    if matches!(suite, Suite::All | Suite::Inequalities) {
        inequalities(&mut run);
    }
    if matches!(suite, Suite::All | Suite::Regions) {
        regions(&mut run);
    }
    VerifyReport {
        suite: suite_name(suite).into(),
        seed,
        library_version: cvtele_core::VERSION.into(),
        passed: run.checks.iter().all(|c| c.passed),
        checks: run.checks,
    }
}

pub fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::All => "all",
        Suite::Oracles => "oracles",
        Suite::Inequalities => "inequalities",
        Suite::Regions => "regions",
    }
}
