use std::path::PathBuf;

use rusqlite::ErrorCode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("index file {0} does not exist")]
    MissingIndex(PathBuf),
    #[error("corrupt index: {0}")]
    CorruptIndex(String),
    #[error("schema mismatch: index has version {found}, expected {expected}")]
    SchemaMismatch { found: String, expected: String },
    #[error("invalid term: {0:?}")]
    InvalidTerm(String),
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("unknown score table {0:?}")]
    UnknownScoreTable(String),
    #[error("score table {table} {}", if *.needs_constant { "requires a constant" } else { "takes no constant" })]
    ScoreArity { table: &'static str, needs_constant: bool },
    #[error("score must be finite and non-negative, got {0}")]
    InvalidScore(f64),
    #[error("stemming flag is fixed once pages are indexed (index has stemming={indexed})")]
    StemmingLocked { indexed: bool },
    #[error("nothing to analyze: index has no pages")]
    NothingToAnalyze,
    #[error("graph has no edges")]
    ZeroGraph,
    #[error("node weight must be positive and finite, got {weight} for (indeg {indegree}, outdeg {outdegree})")]
    InvalidWeight {
        weight: f64,
        indegree: usize,
        outdegree: usize,
    },
    #[error("query is empty after normalization")]
    EmptyQuery,
    #[error("{table} is empty; run analyze first")]
    NeedsAnalysis { table: &'static str },
    #[error("anchor scheme must be 1..=4, got {0}")]
    InvalidScheme(u8),
    #[error("unknown scorer {0:?}")]
    UnknownScorer(String),
    #[error("invalid scorer weight: {0}")]
    InvalidScorerWeight(String),
    #[error("unknown weight preset {0:?}")]
    UnknownPreset(String),
    #[error("page rejected: {0}")]
    PageRejected(String),
    #[error("storage error: {0}")]
    Storage(rusqlite::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable code used on the wire.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MissingIndex(_) => "MissingIndex",
            Error::CorruptIndex(_) => "CorruptIndex",
            Error::SchemaMismatch { .. } => "SchemaMismatch",
            Error::InvalidTerm(_) => "InvalidTerm",
            Error::DanglingReference(_) => "DanglingReference",
            Error::UnknownScoreTable(_) => "UnknownScoreTable",
            Error::ScoreArity { .. } => "ScoreArity",
            Error::InvalidScore(_) => "InvalidScore",
            Error::StemmingLocked { .. } => "StemmingLocked",
            Error::NothingToAnalyze => "NothingToAnalyze",
            Error::ZeroGraph => "ZeroGraph",
            Error::InvalidWeight { .. } => "InvalidWeight",
            Error::EmptyQuery => "EmptyQuery",
            Error::NeedsAnalysis { .. } => "NeedsAnalysis",
            Error::InvalidScheme(_) => "InvalidScheme",
            Error::UnknownScorer(_) => "UnknownScorer",
            Error::InvalidScorerWeight(_) => "InvalidScorerWeight",
            Error::UnknownPreset(_) => "UnknownPreset",
            Error::PageRejected(_) => "PageRejected",
            Error::Storage(_) => "Storage",
            Error::Io(_) => "Io",
        }
    }
}

impl Error {
    /// True for failures of the index file itself (corruption, full disk,
    /// I/O, lost write access), as opposed to problems with one page.
    pub fn is_index_level(&self) -> bool {
        match self {
            Error::MissingIndex(_)
            | Error::CorruptIndex(_)
            | Error::SchemaMismatch { .. }
            | Error::Io(_) => true,
            Error::Storage(e) => matches!(
                e.sqlite_error_code(),
                Some(
                    ErrorCode::DiskFull
                        | ErrorCode::SystemIoFailure
                        | ErrorCode::ReadOnly
                        | ErrorCode::CannotOpen
                        | ErrorCode::DatabaseBusy
                        | ErrorCode::DatabaseLocked
                        | ErrorCode::OutOfMemory
                )
            ),
            _ => false,
        }
    }
}

impl From<rusqlite::Error> for Error {
    fn from(e: rusqlite::Error) -> Self {
        match e.sqlite_error_code() {
            Some(ErrorCode::DatabaseCorrupt | ErrorCode::NotADatabase) => {
                Error::CorruptIndex(e.to_string())
            }
            _ => Error::Storage(e),
        }
    }
}
