use thiserror::Error;

/// Errors produced by the outage library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OutageError {
    /// An argument or configuration field lies outside its valid domain.
    #[error("domain error: {field} = {value} ({reason})")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A scenario combines options that the model does not define.
    #[error("invalid scenario: {0}")]
    Scenario(String),

    /// Adaptive quadrature hit its subdivision cap before meeting tolerance.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:.6e}, error {error:.3e})"
    )]
    NonConvergence {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },
}

pub type Result<T> = std::result::Result<T, OutageError>;

pub(crate) fn domain(field: &'static str, value: f64, reason: &'static str) -> OutageError {
    OutageError::Domain {
        field,
        value,
        reason,
    }
}
