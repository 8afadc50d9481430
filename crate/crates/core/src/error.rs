use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("size guard exceeded: {what} is {actual}, limit {limit}")]
    SizeGuard {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    /// Some outside vertex is adjacent to every planted vertex on the other
    /// side, so no witness of the case construction exists.
    #[error("certificate infeasible: saturated vertices {saturated:?}")]
    CertificateInfeasible { saturated: Vec<Saturation> },

    #[error("column {column} is all ones; recentered matrix undefined")]
    SaturatedColumn { column: usize },

    #[error("adversary caps infeasible: requested {requested} edges, at most {available} fit")]
    InfeasibleCaps { requested: usize, available: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("linear algebra failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

/// A vertex whose cross-degree into the planted set equals the planted size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Saturation {
    pub side: Side,
    pub vertex: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
