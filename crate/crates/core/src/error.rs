use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entry count {len} does not match a {rows}x{cols} matrix")]
    EntryCount { rows: usize, cols: usize, len: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    Shape { context: &'static str, expected: String, actual: String },

    #[error("weight matrix must be nonzero")]
    ZeroWeight,

    #[error("group inverse requires index ≤ 1 (index is {index})")]
    IndexTooLarge { index: usize },

    #[error("{what} is singular")]
    Singular { what: &'static str },

    #[error("m must be a positive integer")]
    InvalidOrder,

    #[error(
        "rank((AW)^k) = {rank_aw} but rank((WA)^k) = {rank_wa}; \
         the rank tolerance is probably miscalibrated for this input"
    )]
    RankMismatch { rank_aw: usize, rank_wa: usize },

    #[error("lower-left block of {which} has norm {norm:e}, expected zero")]
    NotTriangular { which: &'static str, norm: f64 },

    #[error("unknown name `{0}`")]
    UnknownVariant(String),

    #[error("{equation} residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { equation: &'static str, residual: f64, tol: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn shape_err(context: &'static str, expected: (usize, usize), actual: (usize, usize)) -> Error {
    Error::Shape {
        context,
        expected: format!("{}x{}", expected.0, expected.1),
        actual: format!("{}x{}", actual.0, actual.1),
    }
}
