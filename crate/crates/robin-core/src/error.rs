use alloc::string::String;
use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidArgument(&'static str),
    /// A factorization term has a composite base.
    NonPrimeBase(u64),
    /// A prime appears more than once in a factorization.
    DuplicatePrime(u64),
    /// A factorization term has exponent zero.
    ZeroExponent(u64),
    /// Malformed factorization text.
    ParseSyntax { position: usize, message: String },
    /// A numeric literal does not fit its target type.
    Overflow(&'static str),
    /// The value lies outside the domain of the requested functional.
    Domain(&'static str),
    /// The trial-division budget was exceeded.
    TooLargeToFactor,
    /// The requested table does not fit the memory budget.
    MemoryBudget,
    /// A sign or ordering could not be certified after maximal
    /// precision escalation.
    Indeterminate,
    /// Paired list arguments have different lengths.
    LengthMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::NonPrimeBase(q) => write!(f, "non-prime base: {q}"),
            Error::DuplicatePrime(q) => write!(f, "duplicate prime: {q}"),
            Error::ZeroExponent(q) => write!(f, "zero exponent on prime {q}"),
            Error::ParseSyntax { position, message } => {
                write!(f, "parse error at byte {position}: {message}")
            }
            Error::Overflow(what) => write!(f, "overflow: {what}"),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::TooLargeToFactor => write!(f, "too large to factor within budget"),
            Error::MemoryBudget => write!(f, "memory budget exceeded"),
            Error::Indeterminate => write!(f, "indeterminate after precision escalation"),
            Error::LengthMismatch => write!(f, "list lengths differ"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
