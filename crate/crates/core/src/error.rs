use alloc::string::String;

/// Failure classes shared by every operation.
///
/// The variants map one-to-one onto the CLI exit codes (2, 3, 4, and 1 for
/// internal errors).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("input error: {0}")]
    Input(String),
    /// A numerical check or convergence criterion was not met.
    #[error("tolerance failure: {0}")]
    Tolerance(String),
    /// The requested family/case is not implemented.
    #[error("capability error: {0}")]
    Capability(String),
    /// Broken internal invariant.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! input_err {
    ($($t:tt)*) => { $crate::error::Error::Input(alloc::format!($($t)*)) };
}
macro_rules! capability_err {
    ($($t:tt)*) => { $crate::error::Error::Capability(alloc::format!($($t)*)) };
}
macro_rules! tolerance_err {
    ($($t:tt)*) => { $crate::error::Error::Tolerance(alloc::format!($($t)*)) };
}
pub(crate) use {capability_err, input_err, tolerance_err};
