use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the exit-law computations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// `(alpha, rho)` is not the parameter pair of a strictly stable law.
    Inadmissible { alpha: f64, rho: f64 },
    /// The law is admissible but the requested formula does not cover it.
    Unsupported(String),
    /// A series or quadrature did not reach its tolerance.
    NonConvergence {
        what: &'static str,
        best: f64,
        abs_err: f64,
        evaluations: usize,
    },
    /// The rational-alpha policy could not resolve a vanishing divisor.
    Resonance { alpha: f64, index: usize },
    /// A sample pool was empty where draws were required.
    EmptyPool,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Resonance { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Inadmissible { alpha, rho } => write!(
                f,
                "(alpha = {alpha}, rho = {rho}) is not an admissible strictly stable parameter pair"
            ),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::NonConvergence {
                what,
                best,
                abs_err,
                evaluations,
            } => write!(
                f,
                "{what} did not converge after {evaluations} evaluations \
                 (best estimate {best:e}, error estimate {abs_err:e})"
            ),
            Error::Resonance { alpha, index } => write!(
                f,
                "resonant divisor at index {index} for alpha = {alpha} could not be resolved"
            ),
            Error::EmptyPool => f.write_str("sample pool is empty"),
        }
    }
}
