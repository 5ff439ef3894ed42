use thiserror::Error;

use crate::params::SpeciesExponents;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "alpha = ({0}, {1}, {2}) is outside the Weyl chamber Λ³: need 0 < a0sq < a1sq < a2sq"
    )]
    WeylViolation(f64, f64, f64),

    #[error("degree {k} is incompatible with exponents {gamma}: k - |γ| must be even and nonnegative")]
    ParityMismatch { k: usize, gamma: SpeciesExponents },

    #[error("recurrence is not symmetrizable: B_{j}·C_{} = {product} ≤ 0", j + 1)]
    NonSymmetrizable { j: usize, product: f64 },

    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("ν̃ = {nu_tilde} is not an eigenvalue of the recurrence (scaled residual {residual:e})")]
    NotAnEigenvalue { nu_tilde: f64, residual: f64 },

    #[error("polynomial root {re} + {im}i is not real")]
    ComplexRootDetected { re: f64, im: f64 },

    #[error("harmonic of degree {k} with |γ| = {gamma_total} needs {expected} roots, got {got}")]
    DegreeMismatch {
        k: usize,
        gamma_total: u32,
        expected: usize,
        got: usize,
    },

    #[error("point lies on a coordinate plane: sphero-conal coordinates ({u1}, {u2}) touch the boundary")]
    OnAxisDegeneracy { u1: f64, u2: f64 },

    #[error("quadrature did not converge: |Q(n) - Q(2n)| = {difference:e} at order {order}")]
    QuadratureNotConverged { order: usize, difference: f64 },

    #[error("variant discrimination inconclusive: resolved error {resolved:e}, printed error {printed:e}")]
    Inconclusive { resolved: f64, printed: f64 },

    #[error("eigensolve failed for k = {k}, γ = {gamma}: {source}")]
    Solver {
        k: usize,
        gamma: SpeciesExponents,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Strips `Solver` context wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Solver { source, .. } => source.root_cause(),
            other => other,
        }
    }
}
