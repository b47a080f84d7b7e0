use thiserror::Error;

/// Errors raised by the spectra toolkit.
///
/// Variants are grouped by who is at fault: `Parse`, `Domain`, `Size` and
/// `Io` are input problems, `PrecisionExhausted` asks the caller for more
/// digits, and `ContractViolation` means a property that must hold did not.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors that signal an internal invariant failure rather than bad input.
    pub fn is_contract_violation(&self) -> bool {
        matches!(self, Error::ContractViolation(_))
    }
}
