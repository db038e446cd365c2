use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    BadPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("points are proportional and do not span a line")]
    DegenerateSpan,
    #[error("the u-leading coefficient of the divisor vanishes; reparametrize first")]
    LeadingZero,
    #[error("dividend degree {dividend} is below divisor degree {divisor}")]
    DegreeTooLow { dividend: u32, divisor: u32 },
    #[error("the zero form has no roots to report")]
    ZeroForm,
    #[error("parametrization has a base point")]
    BasePoint,
    #[error("the all-zero vector is not a projective point")]
    ZeroPoint,
    #[error("quadric rank {rank} is outside [3, {max}]")]
    BadRank { rank: usize, max: usize },
    #[error("point is not on the Segre quadric x0*x3 = x1*x2")]
    NotOnQuadric,
    #[error("retry budget of {attempts} exhausted while {what}")]
    RetryExhausted { what: String, attempts: usize },
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("unknown gallery construction `{0}`")]
    UnknownConstruction(String),
    #[error("component {0} is contained in the hypersurface")]
    ComponentContained(usize),
    #[error("duplicate point in evaluation set")]
    DuplicatePoint,
    #[error("point does not lie on the hypersurface")]
    PointNotOnW,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("search exhausted after {attempts} attempts: {what}")]
    SearchExhausted { what: String, attempts: usize },
    #[error("no rational intersection point on a final line")]
    NoRationalLinkingCandidate,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate schema version {found} is not supported (expected {expected})")]
    SchemaMismatch { found: u32, expected: u32 },
    #[error("replay diverged: {0}")]
    ReplayDivergence(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("serialization: {0}")]
    Serde(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
