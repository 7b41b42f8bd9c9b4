use num_bigint::BigUint;
use thiserror::Error;

use crate::verifier::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {dim} (supported: {min}..={max})")]
    UnsupportedDimension { dim: usize, min: usize, max: usize },

    #[error("index {index} out of range for sequence of length {length}")]
    IndexOutOfRange { index: BigUint, length: BigUint },

    #[error("invalid pair: expected a < b, got a = {a}, b = {b}")]
    InvalidPair { a: BigUint, b: BigUint },

    #[error("{what} needs {required} but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: BigUint,
        budget: u64,
    },

    #[error("value does not fit in a fixed-width cell: {0}")]
    Overflow(BigUint),

    #[error("input sequence rejected: {0}")]
    Rejected(Violation),

    #[error("empty input sequence")]
    EmptyInput,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no witness case applies to pair ({a}, {b})")]
    NoWitness { a: BigUint, b: BigUint },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
