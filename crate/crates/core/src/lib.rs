//! Reconstruction of the qubit state space from an entropy bound on an
//! eight-point phase space.
//!
//! A two-level system measured along three orthogonal directions has an
//! eight-point phase space, the sign patterns `{+1,-1}^3`. A *signed
//! distribution* assigns real weights summing to one to those points;
//! negativity is allowed. A weight vector `q` *represents* a Bloch vector `r`
//! when `A q = (r, 1)` for the fixed 4×8 sign matrix [`RepresentationMatrix`].
//!
//! The library computes, for any potential state `r`:
//!
//! * the representation maximizing the order-2k signed Rényi entropy,
//!   equivalently minimizing the 2k-norm over the affine representation
//!   set: closed form at `k = 1` ([`solver::maxent2`]), damped Newton
//!   iteration above ([`solver::minnorm`]), each with a dual-norm
//!   certificate and duality gap;
//! * whether the entropy bound `H_2k >= 2` is met at each order, and whether
//!   `r` is a quantum state ([`oracle`]);
//! * whether a *nonnegative* representation meets the bound
//!   ([`solver::minnorm_nonneg2`], [`oracle::classical_representable`]);
//! * the critical-point structure and global maximum `(1/2)^((k-1)/k)` of the
//!   norm-ratio functional `f(w) = |A^T w|_2 / |A^T w|_{2k/(2k-1)}` that
//!   drives the `k > 1` analysis ([`dual_geometry`]).
//!
//! Everything is pure `f64` arithmetic over fixed-size arrays; the crate is
//! `no_std` (with `alloc`) and all operations are safe to call concurrently.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dual_geometry;
pub mod entropy;
mod linalg;
pub mod oracle;
pub mod phase_space;
pub mod solver;

pub use entropy::{EntropyOrder, GeneralOrder};
pub use phase_space::{BlochVector, HermitianState, RepresentationMatrix, SignedDistribution};
pub use solver::{SolveReport, SolverOptions};

use core::fmt;

/// Default tolerances. All quantities handled by this crate are O(1), so the
/// exact-arithmetic checks sit near f64 round-off and the iterative ones a
/// few orders above it.
pub mod tol {
    /// Allowed deviation of a distribution's total weight from one.
    pub const SUM: f64 = 1e-12;
    /// Hermiticity and unit-trace slack for 2×2 state matrices.
    pub const HERMITIAN: f64 = 1e-12;
    /// Slack on the Bloch-ball membership test `|r|_2 <= 1`.
    pub const PSD: f64 = 1e-12;
    /// Gradient infinity-norm at which the Newton solver stops.
    pub const GRADIENT: f64 = 1e-12;
    /// Largest acceptable duality gap for a converged solve.
    pub const GAP: f64 = 1e-9;
    /// Dual-feasibility slack `|A^T x|_p' <= 1 + FEASIBILITY`.
    pub const FEASIBILITY: f64 = 1e-10;
    /// Largest acceptable KKT residual for a dual certificate.
    pub const KKT: f64 = 1e-8;
    /// Entropy slack when deciding `H_2k >= 2`; boundary states count as
    /// satisfying, matching the non-strict bound.
    pub const ENTROPY: f64 = 1e-9;
    /// Interval width at which the boundary bisection stops.
    pub const SCAN: f64 = 1e-8;
}

/// Errors reported by the library.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Error {
    /// Component sum of a signed distribution is not 1 within tolerance.
    InvalidDistribution { sum: f64 },
    /// A 2×2 matrix deviates from Hermitian symmetry.
    NotHermitian { deviation: f64 },
    /// A 2×2 matrix does not have unit trace.
    InvalidTrace { trace: f64 },
    /// Entropy of the all-zero vector is undefined.
    UndefinedEntropy,
    /// An unsigned entropy was requested for a vector with a negative entry;
    /// use [`entropy::renyi_signed`] for signed distributions.
    NegativeComponent { index: usize },
    /// Entropy order out of range (`k >= 1`, `alpha > 0`, probe order >= 1).
    InvalidOrder,
    /// A finite-difference step schedule must be positive and decreasing.
    InvalidStepSchedule,
    /// The zero vector has no direction.
    ZeroVector,
    /// The KKT residual of a dual certificate exceeded tolerance, so the
    /// primal point it was derived from has not converged.
    CertificateFailure { residual: f64 },
    /// The iterative solver failed to converge at the given order.
    NonConvergence { k: u32 },
    /// A scan direction must be a unit vector.
    InvalidDirection { norm: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::InvalidDistribution { sum } => {
                write!(f, "signed distribution components sum to {sum}, expected 1")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:e})")
            }
            Error::InvalidTrace { trace } => {
                write!(f, "matrix trace is {trace}, expected 1")
            }
            Error::UndefinedEntropy => write!(f, "entropy of the zero vector is undefined"),
            Error::NegativeComponent { index } => write!(
                f,
                "component {index} is negative; use renyi_signed for signed distributions"
            ),
            Error::InvalidOrder => write!(f, "entropy order out of range"),
            Error::InvalidStepSchedule => {
                write!(f, "step schedule must be positive and strictly decreasing")
            }
            Error::ZeroVector => write!(f, "zero vector has no direction"),
            Error::CertificateFailure { residual } => {
                write!(f, "dual certificate KKT residual {residual:e} exceeds tolerance")
            }
            Error::NonConvergence { k } => {
                write!(f, "norm minimization did not converge at k = {k}")
            }
            Error::InvalidDirection { norm } => {
                write!(f, "scan direction must be a unit vector (norm {norm})")
            }
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
