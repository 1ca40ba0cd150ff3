//! Braunstein-Kimble teleportation with non-unit gain, viewed as a simulator
//! of phase-insensitive channels.
//!
//! Alice mixes the input with her half of a two-mode resource, homodynes
//! `Q+ = (q_in + q_A)/√2` and `P- = (p_in - p_A)/√2`, and Bob displaces his mode
//! by `g√2 (Q+, P-)`. For a standard-form resource `(a, b, c)` the protocol
//! realizes the channel `tau = g²`, `y = g²a - 2gc + b`.

use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::Serialize;

use crate::channels::PhaseInsensitiveChannel;
use crate::error::{Error, Result};
use crate::gaussian::{
    is_physical, CovarianceMatrix, DisplacementVector, GaussianState, TwoModeStandardForm,
    DEFAULT_TOL,
};

/// The two channels at which the minimal-entanglement resource needs infinite
/// energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    /// `tau = tanh r`, `y = 1 - tanh r`.
    Attenuator,
    /// `tau = coth r`, `y = coth r - 1`.
    Amplifier,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Attenuator => f.write_str("quantum-limited attenuator (tau = tanh r)"),
            Endpoint::Amplifier => f.write_str("quantum-limited amplifier (tau = coth r)"),
        }
    }
}

/// Classical gain applied by Bob, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Gain(f64);

impl Gain {
    pub fn new(g: f64) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Domain(format!("gain must be finite and > 0, got {g}")));
        }
        Ok(Self(g))
    }

    pub fn unit() -> Self {
        Self(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Minimal-energy resource with entanglement `2r` that simulates the channel
/// `(tau, e^{-2r}(1 + tau))` at gain `√tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalResource {
    pub sf: TwoModeStandardForm,
    pub entanglement: f64,
    pub energy: f64,
    pub tau_target: f64,
}

impl OptimalResource {
    pub fn gain(&self) -> Gain {
        Gain(self.tau_target.sqrt())
    }

    pub fn channel(&self) -> PhaseInsensitiveChannel {
        induced_pi_channel(&self.sf, self.gain())
    }
}

/// Root of the TMSS squeezing equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqueezingRoot {
    /// Least entanglement (and energy).
    #[default]
    Smaller,
    Larger,
}

fn sigma_z() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

fn block(v: &DMatrix<f64>, r: usize, c: usize) -> Matrix2<f64> {
    Matrix2::new(v[(r, c)], v[(r, c + 1)], v[(r + 1, c)], v[(r + 1, c + 1)])
}

fn check_inputs(resource: &CovarianceMatrix, input: &GaussianState) -> Result<()> {
    if resource.mode_count() != 2 {
        return Err(Error::Dimension(format!(
            "teleportation resource must have two modes, got {}",
            resource.mode_count()
        )));
    }
    if input.mode_count() != 1 {
        return Err(Error::Dimension(format!(
            "teleported input must be single-mode, got {} modes",
            input.mode_count()
        )));
    }
    if !is_physical(resource, DEFAULT_TOL) {
        return Err(Error::Unphysical(crate::gaussian::min_uncertainty_eigenvalue(resource)));
    }
    Ok(())
}

/// Output moments `d = g d_in`,
/// `V = g²V_in + g²σzAσz + g(σzC + Cᵀσz) + B` for a resource with blocks
/// `[[A, C], [Cᵀ, B]]`.
pub fn bk_output(resource: &CovarianceMatrix, g: Gain, input: &GaussianState) -> Result<GaussianState> {
    check_inputs(resource, input)?;
    let g = g.0;
    let v = resource.as_matrix();
    let (a, c, b) = (block(v, 0, 0), block(v, 0, 2), block(v, 2, 2));
    let sz = sigma_z();
    let vin = block(input.covariance().as_matrix(), 0, 0);
    let vout = vin * (g * g) + sz * a * sz * (g * g) + (sz * c + c.transpose() * sz) * g + b;
    let d = input.displacement().as_vector() * g;
    let cov = CovarianceMatrix::new(DMatrix::from_iterator(2, 2, vout.iter().copied()))?;
    GaussianState::new(DisplacementVector::new(d)?, cov)
}

/// Independent evaluation of the protocol from the quadrature relations
/// `q_out = q_B + g(q_in + q_A)`, `p_out = p_B + g(p_in - p_A)` applied as a
/// linear map to the joint moments of input and resource.
pub fn heisenberg_oracle(
    resource: &CovarianceMatrix,
    g: Gain,
    input: &GaussianState,
) -> Result<GaussianState> {
    check_inputs(resource, input)?;
    let g = g.0;
    // Joint ordering: (q_in, p_in, q_A, p_A, q_B, p_B).
    #[rustfmt::skip]
    let l = DMatrix::from_row_slice(2, 6, &[
        g, 0.0, g, 0.0, 1.0, 0.0,
        0.0, g, 0.0, -g, 0.0, 1.0,
    ]);
    let joint = input.covariance().direct_sum(resource);
    let mut mean = DVector::zeros(6);
    mean.rows_mut(0, 2).copy_from(input.displacement().as_vector());
    let cov = CovarianceMatrix::new(&l * joint.as_matrix() * l.transpose())?;
    GaussianState::new(DisplacementVector::new(&l * mean)?, cov)
}

/// Channel `(g², g²a - 2gc + b)` realized by a standard-form resource.
///
/// Round-off can leave `y` a few ulps below zero for nearly ideal
/// resources; it is clamped at zero.
pub fn induced_pi_channel(sf: &TwoModeStandardForm, g: Gain) -> PhaseInsensitiveChannel {
    let g = g.0;
    let tau = g * g;
    let y = (g * g * sf.a() - 2.0 * g * sf.c() + sf.b()).max(0.0);
    PhaseInsensitiveChannel::new(tau, y).expect("tau = g² > 0 and y >= 0")
}

/// Minimal-energy resource with `E_N = 2r` whose induced channel at `g = √tau`
/// sits on the accessible-region boundary `y = e^{-2r}(1 + tau)`.
///
/// Valid for `tanh r < tau < coth r`; the endpoints (and beyond) give
/// [`Error::Boundary`]. At `r = 0` the resource is the vacuum for every
/// `tau > 0`.
pub fn optimal_resource(tau: f64, r: f64) -> Result<OptimalResource> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("entanglement parameter must be finite and >= 0, got {r}")));
    }
    if !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be finite, got {tau}")));
    }
    let lower = r.tanh();
    if tau <= lower {
        return Err(Error::Boundary {
            endpoint: Endpoint::Attenuator,
            tau,
            limit: lower,
        });
    }
    if r > 0.0 {
        let upper = 1.0 / r.tanh();
        if tau >= upper {
            return Err(Error::Boundary {
                endpoint: Endpoint::Amplifier,
                tau,
                limit: upper,
            });
        }
    }
    if r == 0.0 {
        let sf = TwoModeStandardForm::vacuum();
        return Ok(OptimalResource {
            sf,
            entanglement: 0.0,
            energy: 0.0,
            tau_target: tau,
        });
    }
    let ep = (2.0 * r).exp();
    let em = (-2.0 * r).exp();
    let gap = (tau - 1.0).abs();
    let den = tau + 1.0 - ep * gap;
    if den <= 0.0 {
        // Only reachable through rounding right at an endpoint.
        let (endpoint, limit) = if tau < 1.0 {
            (Endpoint::Attenuator, lower)
        } else {
            (Endpoint::Amplifier, 1.0 / r.tanh())
        };
        return Err(Error::Boundary { endpoint, tau, limit });
    }
    let b = (ep * tau + em - gap) / den;
    let a = (b + em * (tau - 1.0)) / tau;
    let c = ((b - em) / tau.sqrt()).max(0.0);
    let sf = TwoModeStandardForm::new(a, b, c)?;
    Ok(OptimalResource {
        sf,
        entanglement: 2.0 * r,
        energy: sf.mean_energy(),
        tau_target: tau,
    })
}

/// Mean energy `(a + b - 2)/4` of [`optimal_resource`]; infinite at and
/// beyond the endpoints `tau = tanh r`, `tau = coth r`. NaN for inputs with no
/// meaning (negative or non-finite `r`).
pub fn optimal_resource_energy(tau: f64, r: f64) -> f64 {
    match optimal_resource(tau, r) {
        Ok(res) => res.energy,
        Err(Error::Boundary { .. }) => f64::INFINITY,
        Err(_) => f64::NAN,
    }
}

/// Smallest TMSS squeezing `r'` that simulates `ch` at gain `√tau`.
pub fn tmss_squeezing_for_channel(ch: &PhaseInsensitiveChannel) -> Result<f64> {
    tmss_squeezing_root(ch, SqueezingRoot::Smaller)
}

/// Either root of `y = (1 + tau) cosh 2r' - 2√tau sinh 2r'`.
///
/// Written as `2r' = ln[(1 + √tau)² / (y + √(y² - (1 - tau)²))]` for the
/// smaller root, which is the acosh expression with the `tau = 1` singularity
/// cancelled; at `tau = 1` it reduces to `-ln(y/2)`. The larger root is
/// `ln[(y + √(y² - (1 - tau)²)) / (1 - √tau)²]` and is infinite at `tau = 1`.
pub fn tmss_squeezing_root(ch: &PhaseInsensitiveChannel, root: SqueezingRoot) -> Result<f64> {
    let (tau, y) = (ch.tau(), ch.y());
    let gap = (1.0 - tau).abs();
    if y < gap - DEFAULT_TOL {
        return Err(Error::Domain(format!(
            "channel ({tau}, {y}) is not completely positive"
        )));
    }
    if y > 1.0 + tau + DEFAULT_TOL {
        return Err(Error::Domain(format!(
            "channel ({tau}, {y}) is entanglement breaking; no squeezing is needed"
        )));
    }
    let s = tau.sqrt();
    let w = y + (y * y - gap * gap).max(0.0).sqrt();
    let two_r = match root {
        SqueezingRoot::Smaller => ((1.0 + s) * (1.0 + s) / w).ln(),
        SqueezingRoot::Larger => (w / ((1.0 - s) * (1.0 - s))).ln(),
    };
    Ok((0.5 * two_r).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{coherent_state, log_negativity, symplectic_eigenvalues, tmss};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    /// The squeezing equation exactly as the acosh expression, valid off tau = 1.
    fn acosh_form(tau: f64, y: f64) -> f64 {
        let num = y * (1.0 + tau) - 2.0 * (tau * (y * y - (1.0 - tau).powi(2))).sqrt();
        // Clamped: on the entanglement-breaking edge the argument rounds below 1.
        0.5 * (num / (1.0 - tau).powi(2)).max(1.0).acosh()
    }

    fn g(x: f64) -> Gain {
        Gain::new(x).unwrap()
    }

    #[test]
    fn bk_output_examples() {
        let alpha = Complex64::new(0.4, 0.9);
        let input = coherent_state(alpha);
        let r: f64 = 0.6;
        let out = bk_output(&tmss(r).unwrap().covariance(), Gain::unit(), &input).unwrap();
        assert_eq!(out.displacement(), input.displacement());
        let expect = DMatrix::identity(2, 2) * (1.0 + 2.0 * (-2.0 * r).exp());
        assert_abs_diff_eq!(out.covariance().as_matrix(), &expect, epsilon = 1e-13);

        let classical = bk_output(&CovarianceMatrix::identity(2), Gain::unit(), &input).unwrap();
        assert_abs_diff_eq!(
            classical.covariance().as_matrix(),
            &(DMatrix::identity(2, 2) * 3.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn bk_output_vacuum_input_is_formula() {
        let sf = TwoModeStandardForm::new(2.0, 3.0, 1.5).unwrap();
        let gain = 0.7;
        let out = bk_output(&sf.covariance(), g(gain), &GaussianState::vacuum(1)).unwrap();
        // σzAσz = aI, σzC + Cᵀσz = -2cI for the standard form.
        let y = gain * gain + gain * gain * 2.0 - 2.0 * gain * 1.5 + 3.0;
        assert_abs_diff_eq!(out.covariance().as_matrix(), &(DMatrix::identity(2, 2) * y), epsilon = 1e-14);
    }

    #[test]
    fn bk_rejects_bad_shapes() {
        let sf = tmss(0.3).unwrap().covariance();
        let two = GaussianState::vacuum(2);
        assert!(matches!(bk_output(&sf, Gain::unit(), &two), Err(Error::Dimension(_))));
        assert!(matches!(
            heisenberg_oracle(&CovarianceMatrix::identity(1), Gain::unit(), &GaussianState::vacuum(1)),
            Err(Error::Dimension(_))
        ));
        assert!(Gain::new(0.0).is_err());
        assert!(Gain::new(-1.0).is_err());
    }

    #[test]
    fn oracle_matches_examples() {
        let input = coherent_state(Complex64::new(-0.3, 0.5));
        let res = tmss(0.5).unwrap().covariance();
        let a = bk_output(&res, Gain::unit(), &input).unwrap();
        let b = heisenberg_oracle(&res, Gain::unit(), &input).unwrap();
        assert_abs_diff_eq!(a.covariance().as_matrix(), b.covariance().as_matrix(), epsilon = 1e-13);
        let vac = heisenberg_oracle(&CovarianceMatrix::identity(2), Gain::unit(), &input).unwrap();
        assert_abs_diff_eq!(vac.covariance().as_matrix(), &(DMatrix::identity(2, 2) * 3.0), epsilon = 1e-15);
    }

    #[test]
    fn induced_channel_examples() {
        let r: f64 = 0.8;
        let ch = induced_pi_channel(&tmss(r).unwrap(), Gain::unit());
        assert_eq!(ch.tau(), 1.0);
        assert_abs_diff_eq!(ch.y(), 2.0 * (-2.0 * r).exp(), epsilon = 1e-14);
        let cl = induced_pi_channel(&TwoModeStandardForm::vacuum(), Gain::unit());
        assert_eq!((cl.tau(), cl.y()), (1.0, 2.0));
    }

    #[test]
    fn optimal_resource_reduces_to_tmss_at_unit_tau() {
        let res = optimal_resource(1.0, 0.5).unwrap();
        assert_abs_diff_eq!(res.sf.a(), 1f64.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(res.sf.b(), 1f64.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(res.sf.c(), 1f64.sinh(), epsilon = 1e-14);
        assert_abs_diff_eq!(res.energy, 0.5f64.sinh().powi(2), epsilon = 1e-14);
    }

    #[test]
    fn optimal_resource_vacuum_at_zero_entanglement() {
        for tau in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let res = optimal_resource(tau, 0.0).unwrap();
            assert_eq!((res.sf.a(), res.sf.b(), res.sf.c()), (1.0, 1.0, 0.0), "tau={tau}");
            let ch = res.channel();
            assert_abs_diff_eq!(ch.y(), 1.0 + tau, epsilon = 1e-14);
        }
    }

    #[test]
    fn optimal_resource_properties() {
        for &(tau, r) in &[(0.6, 0.5), (1.5, 0.5), (0.47, 0.5), (2.1, 0.5), (0.2, 0.1), (0.98, 2.0)] {
            let res = optimal_resource(tau, r).unwrap();
            let v = res.sf.covariance();
            assert_abs_diff_eq!(log_negativity(&v).unwrap(), 2.0 * r, epsilon = 1e-8);
            assert_abs_diff_eq!(symplectic_eigenvalues(&v).unwrap()[0], 1.0, epsilon = 1e-8);
            let ch = res.channel();
            assert_abs_diff_eq!(ch.tau(), tau, epsilon = 1e-15);
            assert_abs_diff_eq!(ch.y(), (-2.0 * r).exp() * (1.0 + tau), epsilon = 1e-10);
            assert!(res.energy.is_finite());
        }
    }

    #[test]
    fn optimal_resource_endpoints() {
        let r: f64 = 0.5;
        assert!(matches!(
            optimal_resource(r.tanh(), r),
            Err(Error::Boundary { endpoint: Endpoint::Attenuator, .. })
        ));
        assert!(matches!(
            optimal_resource(1.0 / r.tanh(), r),
            Err(Error::Boundary { endpoint: Endpoint::Amplifier, .. })
        ));
        assert!(matches!(
            optimal_resource(0.46211715, r),
            Err(Error::Boundary { endpoint: Endpoint::Attenuator, .. })
        ));
        assert!(matches!(optimal_resource(1.0, -0.1), Err(Error::Domain(_))));
        assert_eq!(optimal_resource_energy(r.tanh(), r), f64::INFINITY);
        assert_eq!(optimal_resource_energy(1.0 / r.tanh(), r), f64::INFINITY);
    }

    #[test]
    fn optimal_energy_examples() {
        assert_abs_diff_eq!(optimal_resource_energy(1.0, 0.5), 0.27154, epsilon = 1e-5);
        assert_eq!(optimal_resource_energy(0.7, 0.0), 0.0);
        let r: f64 = 0.5;
        let mut prev = 0.0;
        for k in 1..=8 {
            let tau = r.tanh() + 10f64.powi(-k);
            let e = optimal_resource_energy(tau, r);
            assert!(e.is_finite());
            assert!(e > prev, "energy must grow towards the attenuator endpoint");
            prev = e;
        }
    }

    #[test]
    fn squeezing_examples() {
        let ch = PhaseInsensitiveChannel::new(0.5, 0.5).unwrap();
        let rp = tmss_squeezing_for_channel(&ch).unwrap();
        assert_abs_diff_eq!(rp, 0.5 * 3f64.acosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(rp, 0.88137, epsilon = 1e-5);

        let r = 0.5;
        let on_line = PhaseInsensitiveChannel::new(1.0, 2.0 * (-2.0 * r as f64).exp()).unwrap();
        assert_abs_diff_eq!(tmss_squeezing_for_channel(&on_line).unwrap(), r, epsilon = 1e-14);

        let off = PhaseInsensitiveChannel::new(0.5, (-1f64).exp() * 1.5).unwrap();
        let rp = tmss_squeezing_for_channel(&off).unwrap();
        assert_abs_diff_eq!(rp, 0.656, epsilon = 1e-3);
        assert!(rp > 0.5);

        let identity = PhaseInsensitiveChannel::identity();
        assert_eq!(tmss_squeezing_for_channel(&identity).unwrap(), f64::INFINITY);
        let eb = PhaseInsensitiveChannel::new(0.5, 2.0).unwrap();
        assert!(matches!(tmss_squeezing_for_channel(&eb), Err(Error::Domain(_))));
        let bad = PhaseInsensitiveChannel::new(0.5, 0.1).unwrap();
        assert!(matches!(tmss_squeezing_for_channel(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn squeezing_matches_acosh_form_off_unit_tau() {
        for i in 0..30 {
            let tau = 0.05 + 0.1 * i as f64;
            if (tau - 1.0).abs() < 0.05 {
                continue;
            }
            let lo = (1.0 - tau).abs();
            let hi = 1.0 + tau;
            for j in 0..=20 {
                let y = lo + (hi - lo) * j as f64 / 20.0;
                let ch = PhaseInsensitiveChannel::new(tau, y).unwrap();
                let got = tmss_squeezing_for_channel(&ch).unwrap();
                let want = acosh_form(tau, y);
                // acosh has infinite slope at 1, so near the entanglement-breaking
                // edge the reference itself carries ~√ε error.
                assert!((got - want).abs() <= 1e-6 * (1.0 + want), "tau={tau} y={y}: {got} vs {want}");
                let back = (1.0 + tau) * (2.0 * got).cosh() - 2.0 * tau.sqrt() * (2.0 * got).sinh();
                assert!((back - y).abs() <= 1e-12 * (1.0 + y), "tau={tau} y={y}: residual {}", back - y);
            }
        }
    }

    #[test]
    fn unit_tau_limit_matches_neighbouring_channels() {
        let y = 0.9;
        let at_one = tmss_squeezing_for_channel(&PhaseInsensitiveChannel::new(1.0, y).unwrap()).unwrap();
        assert_abs_diff_eq!(at_one, -0.5 * (y / 2.0f64).ln(), epsilon = 1e-15);
        for tau in [1.0 - 1e-6, 1.0 + 1e-6] {
            let near = tmss_squeezing_for_channel(&PhaseInsensitiveChannel::new(tau, y).unwrap()).unwrap();
            assert_abs_diff_eq!(near, at_one, epsilon = 1e-5);
        }
    }

    #[test]
    fn both_roots_reproduce_channel() {
        let ch = PhaseInsensitiveChannel::new(0.4, 0.9).unwrap();
        let small = tmss_squeezing_root(&ch, SqueezingRoot::Smaller).unwrap();
        let large = tmss_squeezing_root(&ch, SqueezingRoot::Larger).unwrap();
        assert!(large > small);
        for rp in [small, large] {
            let sim = induced_pi_channel(&tmss(rp).unwrap(), g(ch.tau().sqrt()));
            assert_abs_diff_eq!(sim.y(), ch.y(), epsilon = 1e-10);
        }
    }
}
