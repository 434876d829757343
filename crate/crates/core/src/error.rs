use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode {mode} out of range for {modes} path modes")]
    InvalidMode { mode: usize, modes: usize },

    #[error("invalid path-mode count {0} (need at least 2)")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max |U\u{2020}U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("degenerate postselection: conditioning event has probability {probability:e}")]
    DegeneratePostselection { probability: f64 },

    #[error("visibility undefined: {0}")]
    UndefinedVisibility(&'static str),

    #[error("malformed probability table: {0}")]
    MalformedTable(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A bench-file syntax or validation error, pinned to a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

impl ParseError {
    pub fn new(line: usize, reason: impl Into<String>) -> Self {
        ParseError {
            line,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

impl std::error::Error for ParseError {}
