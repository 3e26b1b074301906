use alloc::boxed::Box;

pub type Result<T> = core::result::Result<T, WaveError>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WaveError {
    /// A parameter is outside its validity range.
    #[error("invalid configuration for `{field}`: {reason}")]
    Config {
        field: &'static str,
        reason: &'static str,
    },

    #[error("shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    /// The collocation or Newton matrix could not be factored reliably.
    #[error("matrix numerically singular (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("linear solve did not reach tolerance: residual {residual:.3e} > {tolerance:.3e}")]
    NonConvergence { residual: f64, tolerance: f64 },

    /// A sample point lies outside the closed fluid domain.
    #[error("point ({x}, {y}) is outside the fluid domain (surface at {surface})")]
    Domain { x: f64, y: f64, surface: f64 },

    #[error("surface elevation {min_eta:.3e} at node {node} is not above the bed")]
    SurfaceCollapse { min_eta: f64, node: usize },

    #[error("time step failed in RK4 stage {stage}: {source}")]
    StepFailed {
        stage: usize,
        #[source]
        source: Box<WaveError>,
    },

    #[error("resolution: {0}")]
    Resolution(&'static str),

    #[error(
        "Newton iteration stalled after {iterations} iterations (best residual {residual:.3e})"
    )]
    NewtonDiverged { iterations: usize, residual: f64 },

    #[error(
        "Newton Jacobian is singular (pivot ratio {pivot_ratio:.3e}); likely a bifurcation point"
    )]
    Bifurcation { pivot_ratio: f64 },
}
