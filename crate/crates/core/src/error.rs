use thiserror::Error;

/// Failure while evaluating an expression at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("no region of `{function}` matches the point {point:?}")]
    NoRegionMatches { function: String, point: Vec<f64> },
    #[error("domain error: {op} of {value}")]
    Domain { op: &'static str, value: f64 },
    #[error("evaluation produced a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    DimensionMismatch,
    EmptyRegionCover,
    Missing,
    InvalidReferencePoint,
}

/// Problem-file or certificate-file parse failure with a 1-based location.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            kind,
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("numerical failure: residual {0:e} after solve")]
    Numerical(f64),
    #[error("inconsistent LP dimensions")]
    Dimensions,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("cone has no usable representation")]
    NoRepresentation,
    #[error("dimension {0} is too large for generator enumeration (limit 4)")]
    DimensionTooLarge(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("membership oracle failed: {0}")]
    OracleFailure(String),
    #[error("only {found} admissible samples found, {wanted} required")]
    InsufficientSamples { found: usize, wanted: usize },
    #[error("missing declaration: {0}")]
    MissingDeclaration(String),
    #[error("empty feasible set: {0}")]
    EmptyFeasibleSet(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("required hypothesis missing: {0}")]
    HypothesisMissing(String),
    #[error("anomaly: {0}")]
    Anomaly(String),
    #[error("mismatched certificate: {0}")]
    CertificateMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
