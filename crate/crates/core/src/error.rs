use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("coefficient is singular at x = {x}, theta = {theta}")]
    Singularity { x: f64, theta: f64 },

    #[error("ray at theta = {theta} passes too close to a singular boundary direction")]
    SingularDirection { theta: f64 },

    #[error("f has a pole on the ray endpoint (|v| = {v_abs:e}, |u| = {u_abs:e})")]
    PoleOnRay { u_abs: f64, v_abs: f64 },

    #[error("integration exceeded {max_steps} steps at x = {x} (stiff or singular ray)")]
    StepLimit { max_steps: usize, x: f64 },

    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: f64 },

    #[error("boundary symmetry check failed: {component} = {value:e} relative to |f|")]
    SymmetryCheck { component: &'static str, value: f64 },

    #[error("{quantity} shows no sign change on [{lo}, {hi}] (values {f_lo:e}, {f_hi:e})")]
    BracketFailure {
        quantity: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("empty feasible gamma interval: A = {a}, B = {b}")]
    Infeasible { a: f64, b: f64 },

    #[error("solver did not converge: {reason} (residual history {history:?})")]
    NonConvergence { reason: String, history: Vec<f64> },

    #[error("refined solution left the seed box: {0}")]
    RefineEscaped(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Whether the error describes bad input rather than a numerical failure
    /// on valid input.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Degenerate(_)
                | Error::InvalidGeometry(_)
                | Error::InvalidConfig(_)
        )
    }
}
