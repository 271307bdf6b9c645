use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("grid too large: {cells} cells exceeds the limit of {limit}")]
    GridTooLarge { cells: u128, limit: u128 },
    #[error("pole at alpha = 2*pi*i*{j}/ln {p}")]
    Pole { p: u64, j: i64 },
    #[error("not in the Lizorkin space of the {kind}: {reason}")]
    Lizorkin { kind: String, reason: String },
    #[error("symbol vanishes at xi = {0}")]
    NonInvertible(String),
    #[error("unsolvable: {0}")]
    Unsolvable(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("symbol error: {0}")]
    Symbol(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid-grid",
            Error::Domain(_) => "domain",
            Error::PrimeMismatch(..) => "prime-mismatch",
            Error::DimensionMismatch(..) => "dimension-mismatch",
            Error::GridTooLarge { .. } => "grid-too-large",
            Error::Pole { .. } => "pole",
            Error::Lizorkin { .. } => "lizorkin-membership",
            Error::NonInvertible(_) => "non-invertible",
            Error::Unsolvable(_) => "unsolvable",
            Error::Hypothesis(_) => "hypothesis",
            Error::Symbol(_) => "symbol",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
