use thiserror::Error;

use crate::subspace::EmpiricalSeparation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid smoothing parameter L={l} for an array of M={m} sensors (need 1 <= L < M)")]
    InvalidSmoothing { m: usize, l: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("a rank-{k} signal matrix cannot be built from {n} snapshots")]
    RankInfeasible { k: usize, n: usize },

    #[error("{what}: argument {value} is outside the domain")]
    Domain { what: &'static str, value: f64 },

    /// The argument lies at or below the right edge of the Marcenko-Pastur
    /// bulk, i.e. the spike it would describe is not separated.
    #[error("value {value} is not above the bulk edge {edge}")]
    BelowEdge { value: f64, edge: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("no noise subspace: K={k} sources in dimension {dim}")]
    NoNoiseSubspace { k: usize, dim: usize },

    #[error("signal eigenvalues {:?} do not exceed the bulk edge {:.6}", .0.failed, .0.edge)]
    NotSeparated(Box<EmpiricalSeparation>),

    #[error("found {found} local minima but {wanted} sources were requested")]
    UnderResolved { found: usize, wanted: usize },

    #[error("scenario has no sources")]
    NoSignal,

    #[error("Fisher information matrix is singular")]
    SingularFim,

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),
}
