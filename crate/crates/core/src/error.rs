use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("statistical model is (numerically) pure, |r| = {bloch_norm}; the SLD equation is singular")]
    SingularModel { bloch_norm: f64 },

    #[error("invalid thermal model: {0}")]
    InvalidModel(String),

    #[error("degenerate spectrum: E[{index}] == E[{next}]", next = .index + 1)]
    DegenerateSpectrum { index: usize },

    #[error("invalid populations: {0}")]
    InvalidPopulations(String),

    #[error("spectral temperature is indeterminate (divergent terms of opposite sign)")]
    IndeterminateTemperature,

    #[error("outside the POVM cone: {0}")]
    OutsideCone(String),

    #[error("outcome {outcome} has probability {probability}, too small to condition on")]
    ZeroProbabilityOutcome { outcome: usize, probability: f64 },

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("unsupported extremal query: {0}")]
    UnsupportedQuery(String),

    #[error("information target {target} is infeasible (must lie in (0, {qfi}))")]
    Infeasible { target: f64, qfi: f64 },

    #[error("finite-difference step too large: probability changes by {relative_change} across the stencil")]
    StepTooLarge { relative_change: f64 },

    #[error("constraint manifold has no feasible points")]
    EmptyFeasibleSet,

    #[error("outcome statistics do not depend on the parameter; no estimator can be built")]
    NonInvertibleStatistic,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
