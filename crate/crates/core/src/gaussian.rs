//! Gaussian states in the quadrature representation.
//!
//! Quadratures are ordered `(q1, p1, ..., qm, pm)` and the covariance matrix is
//! normalized so that the vacuum has `V = I`. A covariance matrix is physical
//! when `V + iΩ` is positive semidefinite.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance on the eigenvalues of `V + iΩ` (and of the complete
/// positivity matrix for channels).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative tolerance for accepting a matrix as symmetric.
const SYMMETRY_TOL: f64 = 1e-12;

/// First moments of an `m`-mode state.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementVector(DVector<f64>);

impl DisplacementVector {
    pub fn new(entries: DVector<f64>) -> Result<Self> {
        if entries.is_empty() || entries.len() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "displacement vector must have positive even length, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("displacement entries must be finite".into()));
        }
        Ok(Self(entries))
    }

    pub fn zeros(modes: usize) -> Self {
        assert!(modes > 0, "a state has at least one mode");
        Self(DVector::zeros(2 * modes))
    }

    pub fn mode_count(&self) -> usize {
        self.0.len() / 2
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }
}

/// Real symmetric `2m x 2m` matrix of second moments.
///
/// Construction only checks shape and symmetry; physicality is a separate
/// question answered by [`is_physical`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::Dimension(format!(
                "covariance matrix must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 || rows % 2 != 0 {
            return Err(Error::Dimension(format!(
                "covariance matrix must have positive even side, got {rows}"
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("covariance entries must be finite".into()));
        }
        let scale = matrix.amax().max(1.0);
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric(asym));
        }
        // Store the exactly symmetric part so eigensolvers see a symmetric input.
        let sym = (&matrix + matrix.transpose()) * 0.5;
        Ok(Self(sym))
    }

    pub fn from_row_slice(side: usize, data: &[f64]) -> Result<Self> {
        if data.len() != side * side {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {side}x{side} matrix, got {}",
                side * side,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(side, side, data))
    }

    pub fn identity(modes: usize) -> Self {
        assert!(modes > 0, "a state has at least one mode");
        Self(DMatrix::identity(2 * modes, 2 * modes))
    }

    /// Single-mode thermal state with mean photon number `n`.
    pub fn thermal(n: f64) -> Result<Self> {
        if !(n >= 0.0) || !n.is_finite() {
            return Err(Error::Domain(format!("thermal photon number must be >= 0, got {n}")));
        }
        Ok(Self(DMatrix::identity(2, 2) * (2.0 * n + 1.0)))
    }

    pub fn mode_count(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Block-diagonal covariance of the product of two states.
    pub fn direct_sum(&self, other: &CovarianceMatrix) -> CovarianceMatrix {
        let (n1, n2) = (self.dim(), other.dim());
        let mut out = DMatrix::zeros(n1 + n2, n1 + n2);
        out.view_mut((0, 0), (n1, n1)).copy_from(&self.0);
        out.view_mut((n1, n1), (n2, n2)).copy_from(&other.0);
        CovarianceMatrix(out)
    }
}

/// An `m`-mode Gaussian state, physical by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    displacement: DisplacementVector,
    covariance: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(displacement: DisplacementVector, covariance: CovarianceMatrix) -> Result<Self> {
        if displacement.as_vector().len() != covariance.dim() {
            return Err(Error::Dimension(format!(
                "displacement length {} does not match covariance side {}",
                displacement.as_vector().len(),
                covariance.dim()
            )));
        }
        let min = min_uncertainty_eigenvalue(&covariance);
        if min < -DEFAULT_TOL * physicality_scale(&covariance) {
            return Err(Error::Unphysical(min));
        }
        Ok(Self {
            displacement,
            covariance,
        })
    }

    /// State with zero first moments.
    pub fn centered(covariance: CovarianceMatrix) -> Result<Self> {
        let d = DisplacementVector::zeros(covariance.mode_count());
        Self::new(d, covariance)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            displacement: DisplacementVector::zeros(modes),
            covariance: CovarianceMatrix::identity(modes),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.covariance.mode_count()
    }

    pub fn displacement(&self) -> &DisplacementVector {
        &self.displacement
    }

    pub fn covariance(&self) -> &CovarianceMatrix {
        &self.covariance
    }
}

/// Two-mode covariance in standard form `A = aI, B = bI, C = -c σz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoModeStandardForm {
    a: f64,
    b: f64,
    c: f64,
}

impl TwoModeStandardForm {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if ![a, b, c].iter().all(|x| x.is_finite()) {
            return Err(Error::Domain(format!(
                "standard form entries must be finite, got ({a}, {b}, {c})"
            )));
        }
        if c < 0.0 {
            return Err(Error::Domain(format!("standard form requires c >= 0, got {c}")));
        }
        let cm = standard_form_cm(a, b, c);
        let min = min_uncertainty_eigenvalue(&cm);
        if min < -DEFAULT_TOL * physicality_scale(&cm) {
            return Err(Error::Unphysical(min));
        }
        Ok(Self { a, b, c })
    }

    pub fn vacuum() -> Self {
        Self { a: 1.0, b: 1.0, c: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn covariance(&self) -> CovarianceMatrix {
        standard_form_cm(self.a, self.b, self.c)
    }

    /// Mean photon number per mode, `(a + b - 2) / 4`.
    pub fn mean_energy(&self) -> f64 {
        (self.a + self.b - 2.0) / 4.0
    }
}

/// `Ω = ⊕ [[0, 1], [-1, 0]]` over `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    assert!(modes > 0, "symplectic form needs at least one mode");
    let n = 2 * modes;
    let mut omega = DMatrix::zeros(n, n);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Smallest eigenvalue of the Hermitian matrix `re + i·im`, where `re` is
/// symmetric and `im` antisymmetric.
///
/// Uses the real symmetric embedding `[[re, -im], [im, re]]`, whose spectrum is
/// that of the Hermitian matrix with every eigenvalue doubled.
pub(crate) fn hermitian_min_eigenvalue(re: &DMatrix<f64>, im: &DMatrix<f64>) -> f64 {
    let n = re.nrows();
    let mut embed = DMatrix::zeros(2 * n, 2 * n);
    embed.view_mut((0, 0), (n, n)).copy_from(re);
    embed.view_mut((n, n), (n, n)).copy_from(re);
    embed.view_mut((0, n), (n, n)).copy_from(&(-im));
    embed.view_mut((n, 0), (n, n)).copy_from(im);
    SymmetricEigen::new(embed).eigenvalues.min()
}

/// Smallest eigenvalue of `V + iΩ`.
pub fn min_uncertainty_eigenvalue(v: &CovarianceMatrix) -> f64 {
    hermitian_min_eigenvalue(v.as_matrix(), &symplectic_form(v.mode_count()))
}

/// Scale against which eigenvalue tolerances are measured. Eigensolver
/// round-off grows with the matrix norm, so a strongly squeezed pure state
/// would otherwise fail an absolute test.
pub(crate) fn physicality_scale(v: &CovarianceMatrix) -> f64 {
    v.as_matrix().norm().max(1.0)
}

/// True iff every eigenvalue of `V + iΩ` is at least `-tol` (relative to
/// `max(1, ‖V‖_F)`).
pub fn is_physical(v: &CovarianceMatrix, tol: f64) -> bool {
    min_uncertainty_eigenvalue(v) >= -tol * physicality_scale(v)
}

/// Symplectic spectrum of `V`, sorted ascending.
///
/// The spectrum of `iΩV` is computed through the similar matrix `Lᵀ(iΩ)L`,
/// where `V = LLᵀ`. `LᵀΩL` is real antisymmetric, so its singular values are
/// the moduli of its eigenvalues and come in equal pairs.
pub fn symplectic_eigenvalues(v: &CovarianceMatrix) -> Result<Vec<f64>> {
    let chol = v
        .as_matrix()
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Domain("covariance matrix is not positive definite".into()))?;
    let l = chol.l();
    let s = l.transpose() * symplectic_form(v.mode_count()) * &l;
    let mut sv: Vec<f64> = SVD::new(s, false, false).singular_values.iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    Ok(sv.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

/// Partial transposition on the second mode, `(I ⊕ σz) V (I ⊕ σz)`.
pub fn partial_transpose_cm(v: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if v.mode_count() != 2 {
        return Err(Error::Dimension(format!(
            "partial transpose is defined here for two modes, got {}",
            v.mode_count()
        )));
    }
    let mut m = v.as_matrix().clone();
    for k in 0..4 {
        m[(3, k)] = -m[(3, k)];
        m[(k, 3)] = -m[(k, 3)];
    }
    Ok(CovarianceMatrix(m))
}

/// Logarithmic negativity `max{0, -ln ν̃₋}` of a two-mode state (natural log).
pub fn log_negativity(v: &CovarianceMatrix) -> Result<f64> {
    if v.mode_count() != 2 {
        return Err(Error::Dimension(format!(
            "log negativity needs a two-mode state, got {} modes",
            v.mode_count()
        )));
    }
    let min = min_uncertainty_eigenvalue(v);
    if min < -DEFAULT_TOL * physicality_scale(v) {
        return Err(Error::Unphysical(min));
    }
    let nu = symplectic_eigenvalues(&partial_transpose_cm(v)?)?[0];
    Ok((-nu.ln()).max(0.0))
}

/// Mean photon number per mode of a state with zero first moments,
/// `(Tr V / m - 2) / 4`.
pub fn mean_energy(v: &CovarianceMatrix) -> f64 {
    (v.as_matrix().trace() / v.mode_count() as f64 - 2.0) / 4.0
}

/// Mean photon number per mode including the coherent contribution
/// `‖d‖² / (2m)` of the first moments.
pub fn mean_energy_displaced(state: &GaussianState) -> f64 {
    let m = state.mode_count() as f64;
    mean_energy(state.covariance()) + state.displacement().as_vector().norm_squared() / (2.0 * m)
}

/// Coherent state `|α⟩`: `d = √2 (Re α, Im α)`, `V = I`.
pub fn coherent_state(alpha: Complex64) -> GaussianState {
    let s2 = std::f64::consts::SQRT_2;
    GaussianState {
        displacement: DisplacementVector(DVector::from_vec(vec![s2 * alpha.re, s2 * alpha.im])),
        covariance: CovarianceMatrix::identity(1),
    }
}

/// Two-mode squeezed vacuum, `(cosh 2r, cosh 2r, sinh 2r)`.
pub fn tmss(r: f64) -> Result<TwoModeStandardForm> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("squeezing must be finite and >= 0, got {r}")));
    }
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    Ok(TwoModeStandardForm { a: ch, b: ch, c: sh })
}

/// The 4x4 matrix `[[a,0,-c,0],[0,a,0,c],[-c,0,b,0],[0,c,0,b]]`, with no
/// physicality check.
pub fn standard_form_cm(a: f64, b: f64, c: f64) -> CovarianceMatrix {
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        a, 0.0, -c, 0.0,
        0.0, a, 0.0, c,
        -c, 0.0, b, 0.0,
        0.0, c, 0.0, b,
    ]);
    CovarianceMatrix(m)
}

pub fn standard_form_to_cm(sf: &TwoModeStandardForm) -> CovarianceMatrix {
    sf.covariance()
}
