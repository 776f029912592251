//! Error type shared by all modules.

/// Errors reported by the solver layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Power series hit the term cap (or the argument is outside the
    /// series-safe region |z| ≤ 50) before reaching the tolerance.
    #[error("series did not converge: {0}")]
    NonConvergence(String),

    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Energy outside the bound-state window |E| < 1.
    #[error("energy {e} is outside the bound-state window |E| < 1")]
    OutOfWindow { e: f64 },

    /// Coefficient matching was requested at an energy that does not satisfy
    /// the eigenvalue condition; the continuity system is inconsistent there.
    #[error("e = {e} is not an eigenvalue (continuity residual {residual:.3e})")]
    NotAnEigenvalue { e: f64, residual: f64 },

    /// Adaptive quadrature exceeded its subdivision depth limit.
    #[error("adaptive quadrature failed on [{a}, {b}]: depth limit reached")]
    QuadratureFailure { a: f64, b: f64 },

    /// The ODE integrator ran out of steps.
    #[error("ODE integration exceeded {max_steps} steps at x = {x}")]
    IntegrationFailure { max_steps: usize, x: f64 },

    /// A bisection bracket does not straddle the sought transition.
    #[error("bracket [{lo}, {hi}] does not straddle the critical point")]
    BracketInvalid { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
