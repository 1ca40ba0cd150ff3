//! Seeded generators of random physical states, resources and channels, used
//! by the property tests and the `verify` command.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::channels::PhaseInsensitiveChannel;
use crate::gaussian::{coherent_state, CovarianceMatrix, GaussianState, TwoModeStandardForm};

/// Largest `c` keeping the standard form `(a, b, c)` physical:
/// `c² = (min(a, b) - 1)(max(a, b) + 1)`.
pub fn max_correlation(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    ((lo - 1.0) * (hi + 1.0)).max(0.0).sqrt()
}

/// Uniform `a, b ∈ [1, 1 + spread]`, `c` uniform in the physical window.
pub fn standard_form<R: Rng + ?Sized>(rng: &mut R, spread: f64) -> TwoModeStandardForm {
    let a = 1.0 + spread * rng.random::<f64>();
    let b = 1.0 + spread * rng.random::<f64>();
    // Keep a sliver away from the edge so validation never trips on rounding.
    let c = max_correlation(a, b) * rng.random::<f64>() * (1.0 - 1e-9);
    TwoModeStandardForm::new(a, b, c).expect("c inside the physical window")
}

fn rotation(n: usize, mode: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(n, n);
    let (c, si) = (theta.cos(), theta.sin());
    let k = 2 * mode;
    s[(k, k)] = c;
    s[(k, k + 1)] = si;
    s[(k + 1, k)] = -si;
    s[(k + 1, k + 1)] = c;
    s
}

fn squeezer(n: usize, mode: usize, r: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(n, n);
    s[(2 * mode, 2 * mode)] = (-r).exp();
    s[(2 * mode + 1, 2 * mode + 1)] = r.exp();
    s
}

fn beam_splitter(n: usize, i: usize, j: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(n, n);
    let (c, si) = (theta.cos(), theta.sin());
    for q in 0..2 {
        let (a, b) = (2 * i + q, 2 * j + q);
        s[(a, a)] = c;
        s[(b, b)] = c;
        s[(a, b)] = si;
        s[(b, a)] = -si;
    }
    s
}

/// Random symplectic matrix built from layers of phase rotations, single-mode
/// squeezers (`|r| <= max_squeeze`) and beam splitters.
pub fn symplectic<R: Rng + ?Sized>(rng: &mut R, modes: usize, max_squeeze: f64) -> DMatrix<f64> {
    let n = 2 * modes;
    let mut s = DMatrix::identity(n, n);
    for _ in 0..2 {
        for m in 0..modes {
            s = rotation(n, m, 2.0 * PI * rng.random::<f64>()) * s;
            s = squeezer(n, m, max_squeeze * (2.0 * rng.random::<f64>() - 1.0)) * s;
        }
        for i in 0..modes {
            for j in i + 1..modes {
                s = beam_splitter(n, i, j, PI * rng.random::<f64>()) * s;
            }
        }
    }
    s
}

/// `S diag(ν₁, ν₁, …) Sᵀ` with symplectic eigenvalues `ν ∈ [1, 1 + thermal]`.
pub fn physical_covariance<R: Rng + ?Sized>(
    rng: &mut R,
    modes: usize,
    max_squeeze: f64,
    thermal: f64,
) -> CovarianceMatrix {
    let s = symplectic(rng, modes, max_squeeze);
    let mut d = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        let nu = 1.0 + thermal * rng.random::<f64>();
        d[(2 * m, 2 * m)] = nu;
        d[(2 * m + 1, 2 * m + 1)] = nu;
    }
    CovarianceMatrix::new(&s * d * s.transpose()).expect("congruence of a diagonal is symmetric")
}

/// Coherent state with both quadratures of `α` uniform in `[-amp, amp]`.
pub fn coherent<R: Rng + ?Sized>(rng: &mut R, amp: f64) -> GaussianState {
    let re = amp * (2.0 * rng.random::<f64>() - 1.0);
    let im = amp * (2.0 * rng.random::<f64>() - 1.0);
    coherent_state(Complex64::new(re, im))
}

/// Completely positive channel with `tau ∈ [0, tau_max]` and
/// `y ∈ [|1 - tau|, |1 - tau| + extra]`.
pub fn cp_channel<R: Rng + ?Sized>(rng: &mut R, tau_max: f64, extra: f64) -> PhaseInsensitiveChannel {
    let tau = tau_max * rng.random::<f64>();
    let y = (1.0 - tau).abs() + extra * rng.random::<f64>();
    PhaseInsensitiveChannel::new(tau, y).expect("tau, y >= 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{is_physical, symplectic_eigenvalues, symplectic_form, DEFAULT_TOL};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_matrices_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for modes in 1..=3 {
            let s = symplectic(&mut rng, modes, 1.0);
            let om = symplectic_form(modes);
            assert_abs_diff_eq!(&s * &om * s.transpose(), om, epsilon = 1e-12);
        }
    }

    #[test]
    fn generated_states_have_requested_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let v = physical_covariance(&mut rng, 2, 0.8, 2.0);
            assert!(is_physical(&v, DEFAULT_TOL));
            let nu = symplectic_eigenvalues(&v).unwrap();
            assert!(nu.iter().all(|&x| (1.0 - 1e-9..=3.0 + 1e-9).contains(&x)));
        }
    }

    #[test]
    fn correlation_window_edge() {
        assert_abs_diff_eq!(max_correlation(2.0, 2.0), 3f64.sqrt(), epsilon = 1e-15);
        let c = max_correlation(1.5, 4.0);
        assert!(TwoModeStandardForm::new(1.5, 4.0, c * (1.0 - 1e-12)).is_ok());
        assert!(TwoModeStandardForm::new(1.5, 4.0, c * 1.01).is_err());
        assert_eq!(max_correlation(1.0, 5.0), 0.0);
    }
}
