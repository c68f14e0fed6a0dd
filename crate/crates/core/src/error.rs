use alloc::string::String;

/// Errors produced by the simulator core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The implicit Crank-Nicolson solve did not reach the requested tolerance.
    #[error(
        "propagation failed at step {step}: relative residual {residual:.3e} after {iterations} iterations"
    )]
    Propagation {
        step: usize,
        residual: f64,
        iterations: usize,
    },

    /// An expectation value of a Hermitian operator came out with a non-negligible imaginary part.
    #[error("expectation value has imaginary part {imag:.3e}")]
    NonRealExpectation { imag: f64 },

    #[error("analysis error: series is empty")]
    EmptySeries,

    #[error("analysis error: series has {len} records, need at least {needed}")]
    SeriesTooShort { len: usize, needed: usize },

    #[error("analysis error: monotone series, no local minimum found")]
    MonotoneSeries,

    #[error("analysis error: no recurrence found in series")]
    NoRecurrence,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
