use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("invalid length {0}")]
    InvalidLength(i64),
    #[error("monomial is not dominant: {0}")]
    NotDominant(String),
    #[error("offset {rj} below -{r}")]
    OffsetTooSmall { r: i64, rj: i64 },
    #[error("invalid height function: {0}")]
    InvalidHeight(String),
    #[error("invalid index sequence: {0}")]
    InvalidIndices(String),
    #[error("vertex {0} not found")]
    NoSuchVertex(String),
    #[error("vertex {0} is frozen")]
    FrozenVertex(String),
    #[error("restriction leaves arrow {from} -> {to} across the boundary")]
    ClosureViolation { from: String, to: String },
    #[error("incomparable exchange products at {vertex}: {p_in} vs {p_out}")]
    Incomparable { vertex: String, p_in: String, p_out: String },
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("search cap of {0} seeds exceeded")]
    CapExceeded(usize),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("no case applies: {0}")]
    NoCase(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("normalization did not terminate after {0} mutations")]
    NoTermination(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
