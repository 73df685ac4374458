//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} is not divisible by {by}")]
    NotDivisible { what: String, by: i64 },

    #[error("unknown family: {0}")]
    UnknownFamily(String),

    #[error("wrong contraction kind {kind} for {op}")]
    WrongKind { kind: String, op: &'static str },

    #[error("excluded: {0}")]
    Excluded(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("record {index} ({label}) at line {line}: {message}")]
    InvalidRecord {
        index: usize,
        label: String,
        line: usize,
        message: String,
    },

    #[error("pipeline inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow("subtraction"))
}

pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}

pub(crate) fn pow(a: i64, e: u32) -> Result<i64> {
    a.checked_pow(e).ok_or(Error::Overflow("power"))
}

/// Exact division; fails with `NotDivisible` when `b` does not divide `a`.
pub(crate) fn div_exact(a: i64, b: i64, what: &str) -> Result<i64> {
    if b == 0 {
        return Err(Error::InvalidArgument(format!("division by zero in {what}")));
    }
    if a % b != 0 {
        return Err(Error::NotDivisible {
            what: format!("{what} = {a}"),
            by: b,
        });
    }
    Ok(a / b)
}
