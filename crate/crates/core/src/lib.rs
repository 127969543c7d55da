//! Spatially smoothed MUSIC and G-MUSIC for a uniform linear array.
//!
//! The crate builds the smoothed (block-Hankel) snapshot matrix, evaluates the
//! Marcenko-Pastur quantities that govern its spectrum, forms the traditional
//! and G-MUSIC pseudo-spectra, and runs reproducible Monte Carlo experiments
//! comparing them with the Cramer-Rao bound.
//!
//! ```
//! use smoothmusic::{ArrayScenario, estimate_doas, Estimator};
//!
//! let sc = ArrayScenario::new(40, 10, 8, vec![-0.5, 0.7], 20.0).unwrap().with_seed(1);
//! let est = estimate_doas(&sc, Estimator::GMusicSs).unwrap();
//! assert!((est.angles[0] + 0.5).abs() < 1e-2);
//! assert!((est.angles[1] - 0.7).abs() < 1e-2);
//! ```

pub mod array_model;
pub mod error;
pub mod linalg;
pub mod montecarlo;
mod quad;
pub mod rmt;
pub mod rng;
pub mod stats;
pub mod subspace;
pub mod verify;

pub use array_model::{
    hankelize, smoothed_steering, steering_matrix, steering_vector, synthesize_snapshots, ArrayScenario,
    SignalPolicy, SmoothedMatrix, SnapshotMatrix,
};
pub use error::{Error, Result};
pub use montecarlo::{crb, estimate_doas, run_plan, Estimator, ExperimentPlan, MseRow, MseTable, Sweep};
pub use rmt::{h_star, mp_density, mp_stieltjes, phi_inverse, phi_star, w_star, MpParams, SpikeMap};
pub use subspace::{
    find_doas, gmusic_pseudospectrum, noise_variance_estimate, sample_covariance_eig, separation_report,
    traditional_pseudospectrum, EigenSystem, GridPolicy, PseudoSpectrum, SearchMode, SeparationPolicy,
    SeparationReport,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/signal-model.md")]
    mod signal_model {}
    #[doc = include_str!("../../../book/src/marcenko-pastur.md")]
    mod marcenko_pastur {}
    #[doc = include_str!("../../../book/src/spikes.md")]
    mod spikes {}
    #[doc = include_str!("../../../book/src/gmusic.md")]
    mod gmusic {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
