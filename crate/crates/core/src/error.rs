use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("n-gram order must be at least 1")]
    ZeroOrder,

    #[error("token at position {0} is empty")]
    EmptyToken(usize),

    #[error("reference corpus is empty")]
    EmptyCorpus,

    #[error("reference set is empty")]
    EmptyReferenceSet,

    #[error("reference {0} has no tokens")]
    EmptyReference(usize),

    #[error("quality weight {0} is outside [0, 1]")]
    QualityOutOfRange(f64),

    #[error("grade {0} is outside 1..=5")]
    GradeOutOfRange(i64),

    #[error("invalid metric configuration: {0}")]
    InvalidConfig(String),

    #[error("no document-frequency table for order {0}")]
    MissingDfOrder(usize),

    #[error("document-frequency table has order {found}, expected {expected}")]
    DfOrderMismatch { expected: usize, found: usize },

    #[error("{candidates} candidates but {references} reference sets")]
    LengthMismatch { candidates: usize, references: usize },

    #[error("correlation needs at least 3 pairs, got {0}")]
    TooFewPairs(usize),

    #[error("non-finite value at pair {0}")]
    NonFinite(usize),

    #[error("correlation undefined: {0} has zero variance")]
    ZeroVariance(&'static str),

    #[error("agreement needs at least 2 records, got {0}")]
    TooFewRecords(usize),

    #[error("noise scale must be non-negative, got {0}")]
    NegativeSigma(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate article id {id:?}")]
    DuplicateId { line: usize, id: String },

    #[error("split sizes sum to {requested} but corpus has {available} articles")]
    OversubscribedSplit { requested: usize, available: usize },

    #[error("unknown-token symbol {0:?} occurs in the corpus")]
    UnkCollision(String),

    #[error("candidate pool is empty")]
    EmptyPool,

    #[error("index file: {0}")]
    IndexFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
