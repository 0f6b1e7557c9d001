//! Scalar abstraction and the shared tolerance record.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Numerical tolerances used by validation and degeneracy checks.
///
/// All values are absolute and stored as `f64`; generic code converts them
/// with [`Real::lit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum `|m[i][j] - conj(m[j][i])|` accepted as Hermitian.
    pub hermitian: f64,
    /// Maximum `|tr(rho) - 1|`.
    pub trace: f64,
    /// Minimal eigenvalue accepted as positive semidefinite is `-psd`.
    pub psd: f64,
    /// Maximum `|sum |a|^2 - 1|` for pure states.
    pub norm: f64,
    /// Maximum deviation of `O^2` from the identity for dichotomic observables.
    pub dichotomic: f64,
    /// Largest imaginary residue of an expectation value that is silently dropped.
    pub imag_residue: f64,
    /// Negative variances down to `-variance_clamp` are clamped to zero.
    pub variance_clamp: f64,
    /// Negative probabilities down to `-probability_clamp` are clamped to zero.
    pub probability_clamp: f64,
    /// Hermiticity required of eigensolver input.
    pub eig_input: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm is below `eig_offdiag * ||m||`.
    pub eig_offdiag: f64,
    /// `|<W>|` at or below this is treated as zero when dividing by it.
    pub degenerate_mean: f64,
    /// A spread `Delta` at or below this marks an eigenstate (zero error).
    pub eigenstate_spread: f64,
    /// Bisection stops once the bracket on the noise parameter is this narrow.
    pub bisection: f64,
}

impl Tolerances {
    pub const F64: Tolerances = Tolerances {
        hermitian: 1e-12,
        trace: 1e-10,
        psd: 1e-10,
        norm: 1e-12,
        dichotomic: 1e-10,
        imag_residue: 1e-10,
        variance_clamp: 1e-12,
        probability_clamp: 1e-12,
        eig_input: 1e-10,
        eig_offdiag: 1e-12,
        degenerate_mean: 1e-12,
        eigenstate_spread: 1e-10,
        bisection: 1e-6,
    };

    /// Single precision cannot resolve the f64 defaults, so everything is
    /// scaled to a few hundred ulps of `f32`.
    pub const F32: Tolerances = Tolerances {
        hermitian: 1e-5,
        trace: 1e-4,
        psd: 1e-4,
        norm: 1e-5,
        dichotomic: 1e-4,
        imag_residue: 1e-4,
        variance_clamp: 1e-5,
        probability_clamp: 1e-5,
        eig_input: 1e-4,
        eig_offdiag: 1e-6,
        degenerate_mean: 1e-5,
        eigenstate_spread: 1e-3,
        bisection: 1e-5,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::F64
    }
}

/// Real scalar the whole library is generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Default tolerances for this precision.
    const TOL: Tolerances;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f64 {
    const TOL: Tolerances = Tolerances::F64;
}

impl Real for f32 {
    const TOL: Tolerances = Tolerances::F32;
}
