use thiserror::Error;

use crate::expr::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("operation #{op} at byte {pos} exceeds the bound n = {n}")]
    OpOutOfRange { op: u32, n: u8, pos: usize },

    #[error("generator {0} occurs more than once")]
    DuplicateLabel(Label),

    #[error("label sets differ: {0:?} vs {1:?}")]
    LabelMismatch(Vec<Label>, Vec<Label>),

    #[error("label {0} is not present")]
    MissingLabel(Label),

    #[error("label map is not injective on the leaves (two labels map to {0})")]
    NotInjective(Label),

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("invalid pair table: {0}")]
    InvalidPairTable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("boundary of a boundary is nonzero in degree {0}")]
    BoundaryNotNilpotent(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
