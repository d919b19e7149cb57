use thiserror::Error;

/// Errors raised anywhere in the scattering pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("step size underflow at x = {x}: stiff or singular coefficient")]
    StepUnderflow { x: f64 },
    #[error("non-finite coefficient value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular discrete system: {0}")]
    Singular(String),
    #[error("incomplete root scan: more than {max} roots in [{a}, {b}]")]
    IncompleteScan { a: f64, b: f64, max: usize },
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("property {name} violated: measured {measured:e}, tolerance {tol:e}")]
    PropertyViolation { name: String, measured: f64, tol: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
