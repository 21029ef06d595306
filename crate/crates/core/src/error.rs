use alloc::boxed::Box;
use alloc::string::String;

/// Problems with pitch records or datasets.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DataError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("dataset mixes pitchers `{first}` and `{other}`")]
    MixedPitchers { first: String, other: String },
    #[error("start speed {0} is outside (0, 200) mph")]
    SpeedOutOfRange(f64),
    #[error("{field} is not finite")]
    NonFinite { field: &'static str },
    #[error("pitcher id is empty")]
    MissingPitcherId,
}

/// Failures while evaluating or fitting a mixture.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("covariance of component {component} is not positive definite")]
    SingularCovariance { component: usize },
    #[error("component {component} collapsed (total responsibility {mass:e})")]
    EmptyCluster { component: usize, mass: f64 },
    #[error("log-likelihood became non-finite")]
    NonFiniteLikelihood,
    #[error("{n} points cannot support {k} clusters (need at least {required})")]
    TooFewPoints { n: usize, k: usize, required: usize },
    #[error("all {restarts} restarts degenerated, last failure: {last}")]
    AllRestartsDegenerate { restarts: usize, last: Box<FitError> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("responsibility matrix is {rows}x{cols}, expected {n} rows")]
    ShapeMismatch { rows: usize, cols: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelectionError {
    #[error("invalid k range [{k_min}, {k_max}]")]
    InvalidRange { k_min: usize, k_max: usize },
    #[error("{n} points cannot support k = {k_max} (need at least {required})")]
    TooFewPoints { n: usize, k_max: usize, required: usize },
    #[error("penalty scale must be finite and non-negative")]
    InvalidPenaltyScale,
    #[error("no k in [{k_min}, {k_max}] produced a usable fit")]
    NoViableK { k_min: usize, k_max: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StabilityError {
    #[error("assignments have lengths {reference} and {candidate}")]
    DimensionMismatch { reference: usize, candidate: usize },
    #[error("cluster index {index} is out of range for k = {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("split {0} must lie strictly between 0 and 1")]
    InvalidSplit(f64),
    #[error("at least one replication is required")]
    NoReplications,
    #[error("subsets of {small} and {large} points cannot support k = {k} (need {required} each)")]
    TooFewPoints { small: usize, large: usize, k: usize, required: usize },
    #[error("reference fit on the full data failed: {0}")]
    ReferenceFit(FitError),
}
