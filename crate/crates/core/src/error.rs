//! Error type shared by every module in the crate.

use std::fmt;
use std::io;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// A size request exceeded a configured resource ceiling.
    Budget {
        what: &'static str,
        requested: u64,
        budget: u64,
    },
    /// Index beyond the top of a partition table.
    OutOfRange { index: i64, max_n: u64 },
    /// A mathematical precondition of the called operation does not hold.
    Domain(String),
    /// Input sequence too short for the requested operation.
    Length { needed: usize, got: usize },
    /// Relative error against an exactly-zero reference value.
    ZeroReference,
    /// Table cache file is structurally invalid.
    CorruptCache(String),
    /// A cached value failed the pentagonal-recurrence spot check.
    RecurrenceMismatch { index: u64 },
    /// Sweep file could not be parsed.
    SweepParse(String),
    /// Sweep description parsed but violates a field constraint.
    SweepValidation(String),
    /// Constant fitting over an empty row set.
    EmptyFit,
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Budget {
                what,
                requested,
                budget,
            } => write!(f, "{what}: requested {requested} exceeds budget {budget}"),
            Error::OutOfRange { index, max_n } => {
                write!(f, "index {index} beyond table top {max_n}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Length { needed, got } => {
                write!(f, "sequence too short: need {needed}, got {got}")
            }
            Error::ZeroReference => write!(f, "relative error against a zero reference"),
            Error::CorruptCache(msg) => write!(f, "corrupt table cache: {msg}"),
            Error::RecurrenceMismatch { index } => {
                write!(f, "cached p({index}) fails the recurrence spot check")
            }
            Error::SweepParse(msg) => write!(f, "sweep file parse error: {msg}"),
            Error::SweepValidation(msg) => write!(f, "invalid sweep description: {msg}"),
            Error::EmptyFit => write!(f, "cannot fit a constant to zero rows"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
