//! Gaussian channels `d -> Xd`, `V -> XVXᵀ + Y` and the phase-insensitive
//! family `X = √τ I`, `Y = y I`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    hermitian_min_eigenvalue, symplectic_form, CovarianceMatrix, DisplacementVector,
    GaussianState, DEFAULT_TOL,
};

/// Anything that can be written as a gain/noise matrix pair `(X, Y)`.
pub trait GaussianMap {
    /// `(X, Y)` acting on the `2k` quadratures of the `k` modes the map touches.
    fn matrices(&self) -> (DMatrix<f64>, DMatrix<f64>);
}

/// General Gaussian channel, completely positive by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
}

impl GaussianChannel {
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        if !is_cp_general(&x, &y, DEFAULT_TOL)? {
            return Err(Error::NotCompletelyPositive(
                "Y + iXΩXᵀ - iΩ has a negative eigenvalue".into(),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn identity(modes: usize) -> Self {
        let n = 2 * modes;
        Self {
            x: DMatrix::identity(n, n),
            y: DMatrix::zeros(n, n),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.x.nrows() / 2
    }

    pub fn gain(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn noise(&self) -> &DMatrix<f64> {
        &self.y
    }
}

impl GaussianMap for GaussianChannel {
    fn matrices(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        (self.x.clone(), self.y.clone())
    }
}

/// Single-mode phase-insensitive channel with transmissivity (or gain) `tau`
/// and added noise `y`.
///
/// The pair is only required to be in the domain `tau >= 0, y >= 0`; use
/// [`PhaseInsensitiveChannel::completely_positive`] to also demand
/// `y >= |1 - tau|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseInsensitiveChannel {
    tau: f64,
    y: f64,
}

impl PhaseInsensitiveChannel {
    pub fn new(tau: f64, y: f64) -> Result<Self> {
        if !tau.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("channel parameters must be finite, got ({tau}, {y})")));
        }
        if tau < 0.0 {
            return Err(Error::Domain(format!(
                "phase-contravariant channels (tau < 0) are not supported, got tau = {tau}"
            )));
        }
        if y < 0.0 {
            return Err(Error::Domain(format!("added noise must be >= 0, got {y}")));
        }
        Ok(Self { tau, y })
    }

    pub fn completely_positive(tau: f64, y: f64) -> Result<Self> {
        let ch = Self::new(tau, y)?;
        if !pi_is_cp(&ch) {
            return Err(Error::NotCompletelyPositive(format!(
                "y = {y} is below |1 - tau| = {}",
                (1.0 - tau).abs()
            )));
        }
        Ok(ch)
    }

    pub fn identity() -> Self {
        Self { tau: 1.0, y: 0.0 }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_general(&self) -> GaussianChannel {
        let (x, y) = self.matrices();
        GaussianChannel { x, y }
    }
}

impl GaussianMap for PhaseInsensitiveChannel {
    fn matrices(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        (
            DMatrix::identity(2, 2) * self.tau.sqrt(),
            DMatrix::identity(2, 2) * self.y,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelClass {
    Unphysical,
    Identity,
    QuantumLimitedAttenuator,
    QuantumLimitedAmplifier,
    EntanglementBreaking,
    Generic,
}

/// Complete positivity test `Y + iXΩXᵀ - iΩ >= 0` for a general `(X, Y)`.
pub fn is_cp_general(x: &DMatrix<f64>, y: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let n = x.nrows();
    if x.ncols() != n || y.shape() != (n, n) || n == 0 || n % 2 != 0 {
        return Err(Error::Dimension(format!(
            "channel matrices must be matching even-sided squares, got X {:?} and Y {:?}",
            x.shape(),
            y.shape()
        )));
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Domain("channel matrices must be finite".into()));
    }
    let ysym = CovarianceMatrix::new(y.clone())?;
    let omega = symplectic_form(n / 2);
    let xox = x * &omega * x.transpose();
    let im = &xox - &omega;
    let scale = ysym.as_matrix().norm().max(xox.norm()).max(1.0);
    Ok(hermitian_min_eigenvalue(ysym.as_matrix(), &im) >= -tol * scale)
}

/// `y >= |1 - tau|` within [`DEFAULT_TOL`].
pub fn pi_is_cp(ch: &PhaseInsensitiveChannel) -> bool {
    ch.y >= (1.0 - ch.tau).abs() - DEFAULT_TOL
}

/// `y >= 1 + tau` within [`DEFAULT_TOL`].
pub fn pi_is_entanglement_breaking(ch: &PhaseInsensitiveChannel) -> bool {
    ch.y >= 1.0 + ch.tau - DEFAULT_TOL
}

/// Whether the channel lies in the region reachable by teleportation with
/// shared entanglement `E_N = 2r`, i.e. `y >= e^{-2r}(1 + tau)`.
pub fn pi_is_accessible(ch: &PhaseInsensitiveChannel, r: f64, tol: f64) -> bool {
    ch.y >= min_noise_for_entanglement(ch.tau, r) - tol
}

/// Applies `channel` to the modes listed in `modes` (in that order), acting as
/// the identity on the others.
pub fn apply<C: GaussianMap>(
    channel: &C,
    state: &GaussianState,
    modes: &[usize],
) -> Result<GaussianState> {
    let (x, y) = channel.matrices();
    let m = state.mode_count();
    if x.nrows() != 2 * modes.len() {
        return Err(Error::Dimension(format!(
            "channel acts on {} modes but {} mode indices were given",
            x.nrows() / 2,
            modes.len()
        )));
    }
    for (k, &idx) in modes.iter().enumerate() {
        if idx >= m {
            return Err(Error::ModeOutOfRange { index: idx, modes: m });
        }
        if modes[..k].contains(&idx) {
            return Err(Error::Dimension(format!("mode {idx} listed twice")));
        }
    }
    let n = 2 * m;
    let mut xf = DMatrix::identity(n, n);
    let mut yf = DMatrix::zeros(n, n);
    for (i, &mi) in modes.iter().enumerate() {
        for (j, &mj) in modes.iter().enumerate() {
            for (p, q) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                xf[(2 * mi + p, 2 * mj + q)] = x[(2 * i + p, 2 * j + q)];
                yf[(2 * mi + p, 2 * mj + q)] = y[(2 * i + p, 2 * j + q)];
            }
        }
    }
    let d = DisplacementVector::new(&xf * state.displacement().as_vector())?;
    let v = CovarianceMatrix::new(&xf * state.covariance().as_matrix() * xf.transpose() + yf)?;
    GaussianState::new(d, v)
}

/// Entanglement of the channel's Choi state, `max{0, -ln[y / (1 + tau)]}`.
/// Infinite for the identity channel.
pub fn choi_log_negativity(ch: &PhaseInsensitiveChannel) -> f64 {
    if ch.y == 0.0 {
        return f64::INFINITY;
    }
    (-(ch.y / (1.0 + ch.tau)).ln()).max(0.0)
}

/// Smallest noise `e^{-2r}(1 + tau)` reachable with entanglement `E_N = 2r`.
pub fn min_noise_for_entanglement(tau: f64, r: f64) -> f64 {
    (-2.0 * r).exp() * (1.0 + tau)
}

pub fn classify(ch: &PhaseInsensitiveChannel, tol: f64) -> ChannelClass {
    let (tau, y) = (ch.tau, ch.y);
    let cp_line = (1.0 - tau).abs();
    if y < cp_line - tol {
        ChannelClass::Unphysical
    } else if (tau - 1.0).abs() <= tol && y <= tol {
        ChannelClass::Identity
    } else if (y - cp_line).abs() <= tol && tau < 1.0 {
        ChannelClass::QuantumLimitedAttenuator
    } else if (y - cp_line).abs() <= tol && tau > 1.0 {
        ChannelClass::QuantumLimitedAmplifier
    } else if y >= 1.0 + tau - tol {
        ChannelClass::EntanglementBreaking
    } else {
        ChannelClass::Generic
    }
}
