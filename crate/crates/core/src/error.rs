use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix contains a non-finite entry")]
    NotFinite,
    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
    #[error("matrix does not have full column rank")]
    RankDeficient,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate pencil: m + n = {sum} must exceed p = {p}")]
    DegeneratePencil { p: usize, sum: usize },
    #[error("numerical rank loss: {0}")]
    NumericalRankLoss(String),
    #[error("invalid dimension triple: {0}")]
    InvalidTriple(String),
    #[error("root bracket not found: {0}")]
    BracketFailure(String),
    #[error("no root of the edge equation in (0, smallest eigenvalue)")]
    NoRootInBracket,
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("spike not valid for triple: {0}")]
    SpikeInvalidForTriple(String),
    #[error("population variance 1 + theta = {0} is not positive")]
    NegativeVariance(f64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("replication {index} failed: {source}")]
    Replication {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable identifier used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSymmetric(_) => "NotSymmetric",
            Error::NotFinite => "NotFinite",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::RankDeficient => "RankDeficient",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DegeneratePencil { .. } => "DegeneratePencil",
            Error::NumericalRankLoss(_) => "NumericalRankLoss",
            Error::InvalidTriple(_) => "InvalidTriple",
            Error::BracketFailure(_) => "BracketFailure",
            Error::NoRootInBracket => "NoRootInBracket",
            Error::InvalidSpectrum(_) => "InvalidSpectrum",
            Error::SpikeInvalidForTriple(_) => "SpikeInvalidForTriple",
            Error::NegativeVariance(_) => "NegativeVariance",
            Error::OutOfRange(_) => "OutOfRange",
            Error::Parse(_) => "Parse",
            Error::Replication { .. } => "Replication",
            Error::Io(_) => "Io",
        }
    }
}
