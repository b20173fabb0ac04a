use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order {order} exceeds the evaluation horizon {horizon}")]
    HorizonExceeded { order: usize, horizon: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid weight sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid weight function: {0}")]
    InvalidFunction(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("degenerate horizon: {0}")]
    DegenerateHorizon(String),

    #[error("operation requires an isotropic sequence")]
    Anisotropic,

    #[error("slope range insufficient: need {needed}, covered up to {covered}")]
    SlopeRange { needed: f64, covered: f64 },

    #[error("sampled phi is not convex near x = {x}")]
    NonConvex { x: f64 },

    #[error("function has no derivative provider")]
    MissingDerivatives,

    #[error("lattice misalignment: {0}")]
    Misaligned(String),

    #[error("support overflow: {0}")]
    SupportOverflow(String),

    #[error("cannot normalize: {0}")]
    NormalizationImpossible(String),

    #[error("associated function not saturated inside the horizon (lower bound {lower_bound})")]
    Unsaturated { lower_bound: f64 },

    #[error("missing decay certificate: {0}")]
    MissingDecay(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
