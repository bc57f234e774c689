use alloc::string::String;

/// Errors raised by model construction, evolution and analysis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A configuration field violates its invariant.
    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    /// The requested Hilbert space is too large for the chosen backend.
    #[error("capacity exceeded for {what}: requested {requested}, limit {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// The Fock cutoff cannot represent the boson state faithfully.
    #[error("Fock cutoff {cutoff} insufficient: {detail}")]
    CutoffInsufficient { cutoff: usize, detail: String },

    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed-form expression is evaluated at a removable or 0/0 point.
    #[error("singular point: {0}")]
    Singular(String),

    /// Input carries no information for the requested analysis.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Config {
        field,
        reason: reason.into(),
    }
}
