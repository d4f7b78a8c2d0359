use thiserror::Error;

use crate::root::RootError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("{name} = {value} violates {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A bracketed root search failed; carries the solver diagnostics.
    #[error("numerical failure while solving for {target}: {source}")]
    Numerical {
        target: &'static str,
        #[source]
        source: RootError,
    },

    /// `sigma < 2 * pdf(0)` does not hold, so the interior optimum is not
    /// bracketed above the concavity threshold.
    #[error(
        "volatility assumption violated: sigma = {sigma} must be below 2*pdf(0) (margin {margin})"
    )]
    VolatilityTooHigh { sigma: f64, margin: f64 },

    /// An operation needs a fee stream but the equilibrium has none.
    #[error("equilibrium is not feasible: {reason}")]
    Infeasible { reason: String },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            requirement,
        }
    }

    /// True for model-level infeasibility as opposed to bad input or a
    /// numerical failure.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::VolatilityTooHigh { .. } | Error::Infeasible { .. }
        )
    }
}
