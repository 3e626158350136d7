use thiserror::Error;

/// Errors raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("a denominator vanishes identically after substitution")]
    DenominatorVanishes,
    #[error("too many variables: {0} (at most {max})", max = crate::ring::MAX_VARS)]
    TooManyVariables(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("context mismatch: dimension {left} vs {right}")]
    ContextMismatch { left: usize, right: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("degree error: {0}")]
    DegreeError(String),
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("section is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("section is not function-linear: {0}")]
    NotLinear(String),
    #[error("section does not split the anchor: {0}")]
    NotASplitting(String),
    #[error("relative curvature is not totally skew: {0}")]
    NotSkew(String),
    #[error("kernel pairings differ")]
    PairingMismatch,
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("composite is not of the form exp(B): {0}")]
    CompositionNotExpB(String),
    #[error("invalid frame: {0}")]
    FrameInvalid(String),
    #[error("missing simplex {0:?}")]
    MissingSimplex(Vec<usize>),
    #[error("cocycle violation on {simplex:?}: {msg}")]
    CocycleViolation { simplex: Vec<usize>, msg: String },
    #[error("invalid primitive on chart {chart}: {msg}")]
    PrimitiveInvalid { chart: usize, msg: String },
    #[error("no solution with coefficients of degree <= {0}")]
    NoSolutionWithinBound(usize),
    #[error("target is not closed: {0}")]
    NotClosed(String),
    #[error("matrix is singular")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
