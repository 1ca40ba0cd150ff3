//! Average teleportation fidelity for coherent states drawn from the Gaussian
//! prior `P(α) = (λ/π) e^{-λ|α|²}`, and its maximization over the
//! phase-insensitive channels reachable with entanglement `E_N = 2r`.

use std::cell::RefCell;
use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{apply, min_noise_for_entanglement, PhaseInsensitiveChannel};
use crate::error::{Error, Result};
use crate::gaussian::{coherent_state, GaussianState};
use crate::teleportation::{optimal_resource, Endpoint, OptimalResource};

/// Gaussian prior over coherent amplitudes with inverse variance `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputEnsemble {
    lambda: f64,
}

impl InputEnsemble {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!(
                "ensemble inverse variance must be finite and > 0, got {lambda}"
            )));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Optimum at the corner `tau = tanh r` on the pure-loss line.
    AttenuatorBranch,
    /// Optimum strictly inside the completely positive region.
    InteriorBranch,
}

/// Resource realizing an optimal channel, or the endpoint at which the
/// required energy diverges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceOutcome {
    Finite(OptimalResource),
    Divergent { endpoint: Endpoint },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub tau_opt: f64,
    pub y_opt: f64,
    pub fidelity: f64,
    pub branch: Branch,
    pub resource: ResourceOutcome,
}

/// Best lattice point found by [`grid_maximize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMaximum {
    pub tau: f64,
    pub y: f64,
    pub fidelity: f64,
    /// True when the maximizer is a corner of the feasible region rather than
    /// a lattice point.
    pub at_vertex: bool,
    pub points_evaluated: u64,
}

/// Tolerances for [`avg_fidelity_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
        }
    }
}

/// Husimi function `Q(α) = ⟨α|ρ|α⟩ / π` of a single-mode Gaussian state,
/// `2 exp(-δᵀ(V + I)⁻¹δ) / (π √det(V + I))` with `δ = d_α - d`.
pub fn q_function(state: &GaussianState, alpha: Complex64) -> Result<f64> {
    if state.mode_count() != 1 {
        return Err(Error::Dimension(format!(
            "Q function is implemented for single-mode states, got {} modes",
            state.mode_count()
        )));
    }
    let v = state.covariance().as_matrix();
    let m = Matrix2::new(v[(0, 0)] + 1.0, v[(0, 1)], v[(1, 0)], v[(1, 1)] + 1.0);
    let det = m.determinant();
    let d = state.displacement().as_vector();
    let s2 = std::f64::consts::SQRT_2;
    let dq = s2 * alpha.re - d[0];
    let dp = s2 * alpha.im - d[1];
    // δᵀ M⁻¹ δ with the explicit 2x2 inverse.
    let quad = (m[(1, 1)] * dq * dq - 2.0 * m[(0, 1)] * dq * dp + m[(0, 0)] * dp * dp) / det;
    Ok(2.0 * (-quad).exp() / (PI * det.sqrt()))
}

#[inline]
fn fidelity_formula(tau: f64, y: f64, lambda: f64) -> f64 {
    let loss = 1.0 - tau.sqrt();
    2.0 * lambda / (2.0 * loss * loss + lambda * (1.0 + y + tau))
}

/// Closed-form average fidelity `2λ / [2(1 - √tau)² + λ(1 + y + tau)]`.
pub fn avg_fidelity(tau: f64, y: f64, ensemble: InputEnsemble) -> Result<f64> {
    PhaseInsensitiveChannel::completely_positive(tau, y)?;
    Ok(fidelity_formula(tau, y, ensemble.lambda))
}

/// Average fidelity by direct quadrature of `π ∫ P(α) Q_out(α) d²α`.
///
/// The output Q function is evaluated by actually sending each coherent state
/// through the channel. The integrand is radially symmetric, so the integral
/// is taken over `u = |α|²`, mapped onto `[0, 1)` by `λu = -ln(1 - t)`.
pub fn avg_fidelity_numeric(
    tau: f64,
    y: f64,
    ensemble: InputEnsemble,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let channel = PhaseInsensitiveChannel::completely_positive(tau, y)?;
    let lambda = ensemble.lambda;
    let failure = RefCell::new(None);
    let integrand = |t: f64| -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        // s = λ|α|² = -ln(1 - t) absorbs the prior weight exactly; what is
        // left is bounded with at most an algebraic endpoint singularity.
        let u = -(-t).ln_1p() / lambda;
        let alpha = Complex64::new(u.sqrt(), 0.0);
        let q = apply(&channel, &coherent_state(alpha), &[0]).and_then(|out| q_function(&out, alpha));
        match q {
            // πλ e^{-λu} Q(u) du = π Q dt.
            Ok(q) => PI * q,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let out = quadrature::integrate(integrand, 0.0, 1.0, spec.abs_tol);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let target = spec.abs_tol.max(spec.rel_tol * out.integral.abs());
    if !(out.error_estimate <= target) {
        return Err(Error::Quadrature {
            achieved: out.error_estimate,
            target,
        });
    }
    Ok(out.integral)
}

/// Interior stationary point `e^{2r} / (e^r + λ cosh r)²` of the fidelity along
/// the accessible boundary, in a form that does not overflow for large `r`.
fn interior_tau(r: f64, lambda: f64) -> f64 {
    let s = 1.0 / (1.0 + 0.5 * lambda * (1.0 + (-2.0 * r).exp()));
    s * s
}

/// `max{tanh r, e^{2r} / (e^r + λ cosh r)²}`.
pub fn optimal_tau(r: f64, ensemble: InputEnsemble) -> f64 {
    r.tanh().max(interior_tau(r, ensemble.lambda))
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "entanglement parameter must be finite and >= 0, got {r}"
        )));
    }
    Ok(())
}

/// Maximum average fidelity with shared entanglement `E_N = 2r`.
///
/// The attenuator branch applies when `tanh r >= e^{2r}/(e^r + λ cosh r)²`
/// (equality included); its optimal channel is the pure-loss channel whose
/// resource energy diverges.
pub fn optimal_fidelity(r: f64, ensemble: InputEnsemble) -> Result<OptimizationResult> {
    check_r(r)?;
    let lambda = ensemble.lambda;
    let th = r.tanh();
    let interior = interior_tau(r, lambda);
    if th >= interior {
        let loss = 1.0 - th.sqrt();
        return Ok(OptimizationResult {
            tau_opt: th,
            y_opt: min_noise_for_entanglement(th, r),
            fidelity: lambda / (lambda + loss * loss),
            branch: Branch::AttenuatorBranch,
            resource: ResourceOutcome::Divergent {
                endpoint: Endpoint::Attenuator,
            },
        });
    }
    // e^r(1 + λ + tanh r) / (2e^r + λ cosh r), divided through by e^r.
    let fidelity = (1.0 + lambda + th) / (2.0 + 0.5 * lambda * (1.0 + (-2.0 * r).exp()));
    let resource = match optimal_resource(interior, r) {
        Ok(res) => ResourceOutcome::Finite(res),
        Err(Error::Boundary { endpoint, .. }) => ResourceOutcome::Divergent { endpoint },
        Err(e) => return Err(e),
    };
    Ok(OptimizationResult {
        tau_opt: interior,
        y_opt: min_noise_for_entanglement(interior, r),
        fidelity,
        branch: Branch::InteriorBranch,
        resource,
    })
}

/// Best measure-and-prepare strategy: `F = (1 + λ)/(2 + λ)` at
/// `tau = (1 + λ)⁻²`, `y = 1 + tau` (gain `g = (1 + λ)⁻¹`).
pub fn classical_benchmark(ensemble: InputEnsemble) -> OptimizationResult {
    let lambda = ensemble.lambda;
    let g = 1.0 / (1.0 + lambda);
    let tau = g * g;
    let resource = optimal_resource(tau, 0.0).expect("r = 0 admits every tau > 0");
    OptimizationResult {
        tau_opt: tau,
        y_opt: 1.0 + tau,
        fidelity: (1.0 + lambda) / (2.0 + lambda),
        branch: Branch::InteriorBranch,
        resource: ResourceOutcome::Finite(resource),
    }
}

/// Uniform-ensemble limit `1 / (1 + e^{-2r})`.
pub fn unit_gain_limit(r: f64) -> f64 {
    1.0 / (1.0 + (-2.0 * r).exp())
}

/// Gain maximizing the fidelity of BK teleportation through `tmss(r)`:
/// `(2 + λ sinh 2r) / (2 + λ + λ cosh 2r)`.
pub fn tmss_optimal_gain(r: f64, ensemble: InputEnsemble) -> f64 {
    let lambda = ensemble.lambda;
    (2.0 + lambda * (2.0 * r).sinh()) / (2.0 + lambda + lambda * (2.0 * r).cosh())
}

/// Fidelity of TMSS teleportation at the optimal gain,
/// `(sech² r + λ) / (2 + λ - 2 tanh r)`.
pub fn tmss_fidelity(r: f64, ensemble: InputEnsemble) -> f64 {
    let lambda = ensemble.lambda;
    let sech = 1.0 / r.cosh();
    (sech * sech + lambda) / (2.0 + lambda - 2.0 * r.tanh())
}

/// Candidate in the brute-force search; compares by fidelity, then prefers
/// smaller `tau`, then smaller `y`.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    fidelity: f64,
    tau: f64,
    y: f64,
    at_vertex: bool,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        self.fidelity > other.fidelity
            || (self.fidelity == other.fidelity
                && (self.tau < other.tau || (self.tau == other.tau && self.y < other.y)))
    }
}

const FEASIBILITY_SLACK: f64 = 1e-12;

/// Exhaustive maximization of the average fidelity over the lattice
/// `(i·step, j·step)` restricted to `y >= |1 - tau|` and
/// `y >= e^{-2r}(1 + tau)`, together with the corners of that region.
///
/// `tau` ranges over `[0, min(coth r, 3) + 2]` and `y` over
/// `[0, tau_max + 2]`. For `tau > 3` every channel has fidelity below `1/2`,
/// which the classical strategy already beats, so capping the range at
/// `r = 0` loses nothing. Columns are searched in parallel; the reduction is
/// order-independent, so the result matches a sequential scan.
pub fn grid_maximize(r: f64, ensemble: InputEnsemble, step: f64) -> Result<GridMaximum> {
    check_r(r)?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("grid step must be finite and > 0, got {step}")));
    }
    let lambda = ensemble.lambda;
    let coth = if r > 0.0 { 1.0 / r.tanh() } else { f64::INFINITY };
    let tau_max = coth.min(3.0) + 2.0;
    let y_max = tau_max + 2.0;
    let n_tau = (tau_max / step + 1e-9).floor() as u64;
    let n_y = (y_max / step + 1e-9).floor() as u64;
    let shrink = (-2.0 * r).exp();

    let column = |i: u64| -> (Option<Candidate>, u64) {
        let tau = i as f64 * step;
        let y_min = (1.0 - tau).abs().max(shrink * (1.0 + tau));
        let j0 = ((y_min - FEASIBILITY_SLACK) / step).floor().max(0.0) as u64;
        let mut best: Option<Candidate> = None;
        let mut count = 0;
        for j in j0..=n_y {
            let y = j as f64 * step;
            if y < y_min - FEASIBILITY_SLACK {
                continue;
            }
            count += 1;
            let cand = Candidate {
                fidelity: fidelity_formula(tau, y, lambda),
                tau,
                y,
                at_vertex: false,
            };
            if best.map_or(true, |b| cand.beats(&b)) {
                best = Some(cand);
            }
        }
        (best, count)
    };

    let pick = |a: Option<Candidate>, b: Option<Candidate>| match (a, b) {
        (Some(x), Some(y)) => Some(if y.beats(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    };

    let (lattice_best, evaluated) = (0..=n_tau)
        .into_par_iter()
        .map(column)
        .reduce(|| (None, 0), |(a, na), (b, nb)| (pick(a, b), na + nb));

    // Corners where the pure-loss / amplifier line meets the accessible boundary.
    let mut best = lattice_best;
    let mut vertices = vec![];
    if r > 0.0 {
        let th = r.tanh();
        vertices.push((th, 1.0 - th));
        if coth <= tau_max {
            vertices.push((coth, coth - 1.0));
        }
    }
    for (tau, y) in vertices {
        let cand = Candidate {
            fidelity: fidelity_formula(tau, y, lambda),
            tau,
            y,
            at_vertex: true,
        };
        best = pick(best, Some(cand));
    }

    let best = best.expect("the lattice always contains feasible points");
    Ok(GridMaximum {
        tau: best.tau,
        y: best.y,
        fidelity: best.fidelity,
        at_vertex: best.at_vertex,
        points_evaluated: evaluated,
    })
}
