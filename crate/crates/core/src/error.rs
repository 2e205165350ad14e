//! Errors shared across modules.

use alloc::string::String;

/// A syntax error with the byte offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

/// Raised when a Gröbner computation produces a basis element above the configured degree cap.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("Gröbner computation exceeded the degree cap {cap} (reached degree {reached})")]
pub struct DegreeCapExceeded {
    pub cap: u32,
    pub reached: u32,
}
