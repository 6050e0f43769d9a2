use std::io;

use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("unsupported format at byte {offset}: {reason}")]
    UnsupportedFormat { offset: usize, reason: String },

    #[error("truncated data at byte {offset}: expected {expected} payload bytes, found {found}")]
    TruncatedData {
        offset: usize,
        expected: usize,
        found: usize,
    },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("image too small: {width}x{height}, need at least {min}x{min}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min: usize,
    },

    #[error("shape mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    Shape {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },

    #[error("line {line}, column {column}: {reason}")]
    Validation {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Coarse failure class, used to pick a process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Io,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io(_) => ErrorClass::Io,
            Error::Numeric(_) => ErrorClass::Numeric,
            _ => ErrorClass::Validation,
        }
    }

    pub(crate) fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidParameter(reason.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
