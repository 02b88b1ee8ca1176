use thiserror::Error;

/// Everything that can go wrong inside the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("domain error at x = {x}: {message}")]
    Domain { x: f64, message: String },

    #[error("point {x} lies outside the profile domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("quadrature on [{a}, {b}] did not reach tolerance within depth {depth}")]
    QuadratureNotConverged { a: f64, b: f64, depth: u32 },

    #[error("reference integrator step underflow after {steps} steps")]
    StepUnderflow { steps: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("monodromy determinant {det} deviates from 1")]
    DeterminantMismatch { det: f64 },

    #[error("operation requires a real-valued profile")]
    ComplexProfile,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownFunction { .. }
                | Error::OutOfDomain { .. }
                | Error::InvalidArgument(_)
                | Error::ComplexProfile
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
