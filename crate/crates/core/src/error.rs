use thiserror::Error;

/// Errors raised across the crate. Mathematical verdicts (an identity that
/// fails to hold) are not errors; they are returned as explicit verdict
/// types. `Error` covers violated preconditions, malformed inputs and
/// internal postcondition failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix data length {got} does not match {n}x{n}")]
    BadMatrixShape { n: usize, got: usize },

    #[error("dilation matrix is singular")]
    SingularDilation,

    #[error("dilation matrix is not expanding (eigenvalue of magnitude {magnitude})")]
    NotExpanding { magnitude: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands live on different dilation schemes")]
    SchemeMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("filter is not lowpass ({detail})")]
    NotLowpass { detail: String },

    #[error("filter is not highpass (tap sum {sum})")]
    NotHighpass { sum: String },

    #[error("generator {index} does not vanish at z = 1 (value {value})")]
    NonVanishingGenerator { index: usize, value: String },

    #[error("certificate has {k} left generators but {l} right generators")]
    CertificateLengthMismatch { k: usize, l: usize },

    #[error("certificate rejected: {0}")]
    SvpVerifyFailed(String),

    #[error("squared-magnitude identity does not hold: residual differs by {difference}")]
    SosIdentityFailed { difference: String },

    #[error("bank pair does not satisfy the polyphase reconstruction identity")]
    MuepPreconditionFailed,

    #[error("internal error: synthesized bank fails its reconstruction identity at entry ({row},{col})")]
    MuepPostconditionFailed { row: usize, col: usize },

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpusEntry(String),

    #[error("corpus entry `{name}` requires parameter {param}")]
    MissingParameter { name: String, param: &'static str },

    #[error("invariant `{name}` violated: {detail}")]
    InvariantViolation { name: &'static str, detail: String },

    #[error("coefficient does not fit the 64-bit file encoding")]
    CoefficientOverflow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
