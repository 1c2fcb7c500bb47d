use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hamiltonian is not hermitian (defect {0:e})")]
    NonHermitianHamiltonian(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigenvalues form a complex pair (discriminant {discriminant:e})")]
    ComplexEigenvalues { discriminant: f64 },

    #[error("degenerate eigenvalues λ0 = λ1 = {0}")]
    DegenerateEigenvalues(f64),

    #[error("stationary populations undefined for l = m = 0")]
    UndefinedSteadyState,

    #[error("null space has dimension {0}, expected 1")]
    DegenerateNullSpace(usize),

    #[error("fixed point is not a physical state (min eigenvalue {0:e})")]
    NonPhysicalFixedPoint(f64),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
