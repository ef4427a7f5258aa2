use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("invalid connectivity K = {0}, need K >= 2")]
    InvalidConnectivity(usize),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("operation requires eta > 0, got {0}")]
    RequiresPositiveEta(f64),
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("fixed-point iteration did not converge after {0} iterations")]
    FixedPointDiverged(usize),
    #[error("energy {0} is outside the admissible interval")]
    UnsupportedEnergy(f64),
    #[error("tree with {size} vertices exceeds the cap {cap}")]
    TreeTooLarge { size: u128, cap: usize },
    #[error("invalid Green's matrix: {0}")]
    InvalidGreen(String),
    #[error("Gaussian parameter is not integrable (Im B must be positive definite)")]
    NotIntegrable,
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("index tuples are not addable")]
    NotAddable,
    #[error("no closed form: {0}")]
    NoClosedForm(String),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("tail not converged: fitted ratio q = {q_hat} >= 1 at r_max = {r_max}")]
    TailNotConverged { q_hat: f64, r_max: usize },
    #[error("quadrature not converged: relative refinement change {0:e}")]
    QuadratureNotConverged(f64),
    #[error("statistically inconclusive: {0}")]
    StatisticalInconclusive(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl LabError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::NumericalBreakdown(_)
            | LabError::FixedPointDiverged(_)
            | LabError::NotIntegrable
            | LabError::TailNotConverged { .. }
            | LabError::QuadratureNotConverged(_) => 3,
            LabError::StatisticalInconclusive(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
