//! Numerics for pure lattice gauge theory with compact unitary structure
//! groups: U(N) and SU(N) group/algebra operations, finite-lattice geometry
//! with free boundaries, the plaquette action and its Monte Carlo partition
//! function estimators, eigenphase (class function) quadrature, and the
//! free-energy stability bounds built from all of the above.
//!
//! The crate is `no_std` + `alloc`; all transcendentals go through `libm` so
//! results are identical with or without the standard library. IO, CLI and
//! parallel drivers live in the companion crate `latgauge-cli`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod group;
pub mod lattice;
pub mod matrix;
pub mod mc;
pub mod weyl;
pub mod wilson;

pub(crate) mod math;
pub(crate) mod quad;

use core::fmt;

/// Crate-wide error type. Numerical routines refuse to return silently
/// degraded results; every refusal is one of these variants.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation was handed a value outside its contract.
    InvalidParameter(alloc::string::String),
    /// Matrix failed the unitarity tolerance `1e-12 * n`.
    NotUnitary { deviation: f64, tolerance: f64 },
    /// Determinant of a would-be SU(N) element is not 1 within `1e-10`.
    NotSpecialUnitary { det_deviation: f64 },
    /// An eigenphase sits on the branch cut of the principal logarithm.
    BranchCutEigenphase { phase: f64 },
    /// Principal logarithm of an SU(N) element lies outside su(N)
    /// (eigenphase sum is a nonzero multiple of 2 pi).
    LogOutsideAlgebra { phase_sum: f64 },
    /// Jacobi eigensolver failed to converge; input was likely not normal.
    EigenNoConvergence { off_diagonal: f64 },
    /// A small-field hypothesis `|x| < 1/sqrt(N)` was violated.
    SmallFieldViolation { norm: f64, limit: f64 },
    /// An integrand produced a non-finite value on the quadrature grid.
    NonFiniteIntegrand,
    /// Monte Carlo refused: predicted relative std error at the requested
    /// sample count exceeds the honesty limit (integrand too concentrated).
    McGuard {
        predicted_rel_err: f64,
        samples: u64,
        required_samples: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NotUnitary { deviation, tolerance } => write!(
                f,
                "matrix is not unitary: ||U*U - 1|| = {deviation:.3e} exceeds {tolerance:.3e}"
            ),
            Error::NotSpecialUnitary { det_deviation } => write!(
                f,
                "matrix is not special unitary: |det - 1| = {det_deviation:.3e}"
            ),
            Error::BranchCutEigenphase { phase } => write!(
                f,
                "eigenphase {phase:.17} sits on the principal branch cut"
            ),
            Error::LogOutsideAlgebra { phase_sum } => write!(
                f,
                "principal log is outside su(N): eigenphase sum {phase_sum:.6} != 0"
            ),
            Error::EigenNoConvergence { off_diagonal } => write!(
                f,
                "eigensolver did not converge: residual off-diagonal {off_diagonal:.3e}"
            ),
            Error::SmallFieldViolation { norm, limit } => write!(
                f,
                "small-field hypothesis violated: |x| = {norm:.6} >= {limit:.6}"
            ),
            Error::NonFiniteIntegrand => write!(f, "integrand is not finite on the grid"),
            Error::McGuard { predicted_rel_err, samples, required_samples } => write!(
                f,
                "Monte Carlo refused: predicted relative error {predicted_rel_err:.3} at \
                 {samples} samples (need about {required_samples:.3e} samples)"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
