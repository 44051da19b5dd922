use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite value {value} at node ({i}, {j})")]
    NonFinite { i: usize, j: usize, value: f64 },

    #[error("time step {dt} violates the departure-point restriction dt < {limit}")]
    StepSize { dt: f64, limit: f64 },

    #[error("singular local interface system at node ({i}, {j})")]
    SingularLocalSystem { i: usize, j: usize },

    #[error("no interface functionals for crossed node ({i}, {j})")]
    MissingInterfaceRows { i: usize, j: usize },

    #[error("zero diagonal in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("linear solver failed after {iterations} iterations (relative residual {residual:e})")]
    SolverFailure {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("velocity extension diverged ({growth:.3}x growth)")]
    ExtensionUnstable { growth: f64 },

    #[error("non-finite field after step {step}")]
    Diverged { step: usize },
}
