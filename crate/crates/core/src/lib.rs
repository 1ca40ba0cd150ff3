//! Continuous-variable teleportation of Gaussian states as channel simulation
//! under limited entanglement and energy.
//!
//! - [`gaussian`]: covariance-matrix algebra, physicality, symplectic spectra,
//!   logarithmic negativity and energy.
//! - [`channels`]: Gaussian channels, the phase-insensitive `(tau, y)` family
//!   and its regions.
//! - [`teleportation`]: the non-unit-gain Braunstein-Kimble protocol, the
//!   minimal-entanglement resource family and TMSS simulation.
//! - [`fidelity`]: average fidelity over Gaussian coherent-state ensembles and
//!   its optimization.
//! - [`sampling`]: seeded random states, resources and channels.

#![forbid(unsafe_code)]

/// Version of this crate, recorded alongside generated data.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod channels;
pub mod error;
pub mod fidelity;
pub mod gaussian;
pub mod sampling;
pub mod teleportation;

pub use channels::{
    apply, choi_log_negativity, classify, is_cp_general, min_noise_for_entanglement,
    pi_is_accessible, pi_is_cp, pi_is_entanglement_breaking, ChannelClass, GaussianChannel,
    GaussianMap, PhaseInsensitiveChannel,
};
pub use error::{Error, Result};
pub use fidelity::{
    avg_fidelity, avg_fidelity_numeric, classical_benchmark, grid_maximize, optimal_fidelity,
    optimal_tau, q_function, tmss_fidelity, tmss_optimal_gain, unit_gain_limit, Branch,
    GridMaximum, InputEnsemble, OptimizationResult, QuadratureSpec, ResourceOutcome,
};
pub use gaussian::{
    coherent_state, is_physical, log_negativity, mean_energy, mean_energy_displaced,
    partial_transpose_cm, standard_form_cm, standard_form_to_cm, symplectic_eigenvalues,
    symplectic_form, tmss, CovarianceMatrix, DisplacementVector, GaussianState,
    TwoModeStandardForm, DEFAULT_TOL,
};
pub use teleportation::{
    bk_output, heisenberg_oracle, induced_pi_channel, optimal_resource, optimal_resource_energy,
    tmss_squeezing_for_channel, tmss_squeezing_root, Endpoint, Gain, OptimalResource,
    SqueezingRoot,
};
