use thiserror::Error;

/// Errors produced by the tree, algebra, inversion and spectral layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("no edges to delete")]
    NoEdges,
    #[error("{what} = {value} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("empty multiset")]
    EmptyMultiset,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("not rationalizable: {0}")]
    NotRationalizable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a valid quantum-tree ratio: {0}")]
    InvalidRatio(String),
    #[error("not a snowflake ratio: {0}")]
    NotSnowflake(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("data not equilateral-consistent: {0}")]
    NotEquilateral(String),
    #[error("insufficient precision: increase K ({0})")]
    InsufficientPrecision(String),
    #[error("unsupported potential: {0}")]
    UnsupportedPotential(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Semantic,
    Bound,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) | Error::InvalidTree(_) => ErrorKind::Parse,
            Error::BoundExceeded { .. } => ErrorKind::Bound,
            _ => ErrorKind::Semantic,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
