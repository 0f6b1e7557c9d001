use num_complex::Complex;

use super::eig::hermitian_eig;
use super::matrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_QUBITS: usize = 6;

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::BadShape(dim));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::QubitCount { n, min: 1, max: MAX_QUBITS });
    }
    Ok(n)
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Real part of a scalar that should be real; fails when the imaginary
/// residue indicates a non-Hermitian operator.
fn real_part<T: Real>(z: Complex<T>, scale: T) -> Result<T> {
    if z.im.abs() > T::lit(T::TOL.imag_residue) * scale.max(T::one()) {
        return Err(Error::NotHermitian(z.im.abs().as_f64()));
    }
    Ok(z.re)
}

fn check_observable<T: Real>(obs: &DenseMatrix<T>, dim: usize) -> Result<()> {
    if obs.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: obs.dim() });
    }
    let dev = obs.hermitian_deviation();
    if dev > T::lit(T::TOL.hermitian) * obs.frobenius_norm().max(T::one()) {
        return Err(Error::NotHermitian(dev.as_f64()));
    }
    Ok(())
}

fn clamp_variance<T: Real>(v: T) -> T {
    debug_assert!(v >= -T::lit(T::TOL.variance_clamp) * T::lit(1e3), "variance {v}");
    v.max(T::zero())
}

/// Normalized state vector on `n` qubits; qubit 1 is the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm2: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - T::one()).abs() > T::lit(T::TOL.norm) {
            return Err(Error::NotNormalized(norm2.as_f64()));
        }
        Ok(PureState { n_qubits, amplitudes })
    }

    /// Scales `amplitudes` to unit norm first.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm: T = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm.as_f64()));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    /// Real amplitudes placed on computational basis states given as bit strings
    /// such as `"0000"`, normalized afterwards.
    pub fn from_basis_terms(n_qubits: usize, terms: &[(T, &str)]) -> Result<Self> {
        let mut amps = vec![zero::<T>(); 1usize << n_qubits];
        for (amp, bits) in terms {
            if bits.len() != n_qubits || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::Schema(format!("basis label {bits:?} for {n_qubits} qubits")));
            }
            let idx = usize::from_str_radix(bits, 2).expect("validated bit string");
            amps[idx] = amps[idx] + Complex::new(*amp, T::zero());
        }
        Self::normalized(amps)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::QubitIndex { index, n_qubits });
        }
        let mut amps = vec![zero::<T>(); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Self::new(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(zero(), |acc, (a, b)| acc + a.conj() * *b)
    }

    pub fn projector(&self) -> DenseMatrix<T> {
        DenseMatrix::outer(&self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix { n_qubits: self.n_qubits, matrix: self.projector() }
    }

    fn check_dim(&self, obs: &DenseMatrix<T>) -> Result<()> {
        check_observable(obs, self.dim())
    }

    /// `<psi|O|psi>`.
    pub fn expectation(&self, obs: &DenseMatrix<T>) -> Result<T> {
        self.check_dim(obs)?;
        let opsi = obs.matvec(&self.amplitudes);
        let z = self.amplitudes.iter().zip(&opsi).fold(zero(), |acc, (a, b)| acc + a.conj() * *b);
        real_part(z, obs.frobenius_norm())
    }

    /// `(O - <O>) |psi>`, whose squared norm is the variance.
    pub fn deviation_vector(&self, obs: &DenseMatrix<T>) -> Result<Vec<Complex<T>>> {
        let mean = self.expectation(obs)?;
        Ok(obs
            .matvec(&self.amplitudes)
            .into_iter()
            .zip(&self.amplitudes)
            .map(|(o, a)| o - *a * mean)
            .collect())
    }

    /// `||(O - <O>) psi||^2`; stable even when `psi` is nearly an eigenvector.
    pub fn variance(&self, obs: &DenseMatrix<T>) -> Result<T> {
        Ok(self.deviation_vector(obs)?.iter().map(|z| z.norm_sqr()).sum())
    }
}

/// Hermitian, unit-trace, positive semidefinite `2^n x 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    n_qubits: usize,
    matrix: DenseMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, trace and positivity with the default tolerances.
    pub fn new(matrix: DenseMatrix<T>) -> Result<Self> {
        let n_qubits = qubits_for_dim(matrix.dim())?;
        if matrix.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = matrix.hermitian_deviation();
        if dev > T::lit(T::TOL.hermitian) {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        let tr = matrix.trace().re;
        if (tr - T::one()).abs() > T::lit(T::TOL.trace) {
            return Err(Error::BadTrace(tr.as_f64()));
        }
        if !matrix.cholesky_succeeds(T::lit(T::TOL.psd)) {
            let min = hermitian_eig(&matrix)?.min_value();
            return Err(Error::NotPsd(min.as_f64()));
        }
        Ok(DensityMatrix { n_qubits, matrix })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        qubits_for_dim(dim)?;
        let w = T::one() / T::from_usize(dim).expect("small dimension");
        Ok(DensityMatrix { n_qubits, matrix: DenseMatrix::identity(dim).scale(w) })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.matrix
    }

    /// Sets eigenvalues in `[-psd, 0)` to zero and renormalizes the trace.
    pub fn clamp_psd(&self) -> Result<Self> {
        let eig = hermitian_eig(&self.matrix)?;
        let tol = T::lit(T::TOL.psd);
        if eig.min_value() < -tol {
            return Err(Error::NotPsd(eig.min_value().as_f64()));
        }
        if eig.min_value() >= T::zero() {
            return Ok(self.clone());
        }
        let clamped: Vec<T> = eig.values.iter().map(|&v| v.max(T::zero())).collect();
        let total: T = clamped.iter().copied().sum();
        let rebuilt = super::eig::HermitianEig {
            values: clamped.iter().map(|&v| v / total).collect(),
            vectors: eig.vectors,
        }
        .reconstruct();
        let mut m = rebuilt;
        m.symmetrize();
        Self::new(m)
    }

    fn check_dim(&self, obs: &DenseMatrix<T>) -> Result<()> {
        check_observable(obs, self.dim())
    }

    /// `tr(rho O)`.
    pub fn expectation(&self, obs: &DenseMatrix<T>) -> Result<T> {
        self.check_dim(obs)?;
        real_part(self.matrix.trace_product(obs), obs.frobenius_norm())
    }

    /// `tr(rho (O - <O>)^2)`, clamped at zero.
    pub fn variance(&self, obs: &DenseMatrix<T>) -> Result<T> {
        let mean = self.expectation(obs)?;
        let centered = obs - &DenseMatrix::identity(self.dim()).scale(mean);
        let rho_c = &self.matrix * &centered;
        let v = real_part(rho_c.trace_product(&centered), obs.frobenius_norm())?;
        Ok(clamp_variance(v))
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with_pure(&self, psi: &PureState<T>) -> Result<T> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        let rho_psi = self.matrix.matvec(psi.amplitudes());
        let z = psi.amplitudes().iter().zip(&rho_psi).fold(zero(), |acc, (a, b)| acc + a.conj() * *b);
        real_part(z, T::one())
    }

    /// Wraps the output of a trace-preserving map after removing the
    /// anti-Hermitian rounding noise.
    pub(crate) fn from_channel_output(mut matrix: DenseMatrix<T>, n_qubits: usize) -> Result<Self> {
        matrix.symmetrize();
        debug_assert_eq!(matrix.dim(), 1 << n_qubits);
        Self::new(matrix)
    }
}

/// Common interface of pure and mixed states used by the variance model.
pub trait QuantumState<T: Real> {
    fn n_qubits(&self) -> usize;
    fn expectation(&self, obs: &DenseMatrix<T>) -> Result<T>;
    fn variance(&self, obs: &DenseMatrix<T>) -> Result<T>;

    fn spread(&self, obs: &DenseMatrix<T>) -> Result<T> {
        Ok(self.variance(obs)?.sqrt())
    }
}

impl<T: Real> QuantumState<T> for PureState<T> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    fn expectation(&self, obs: &DenseMatrix<T>) -> Result<T> {
        PureState::expectation(self, obs)
    }
    fn variance(&self, obs: &DenseMatrix<T>) -> Result<T> {
        PureState::variance(self, obs)
    }
}

impl<T: Real> QuantumState<T> for DensityMatrix<T> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    fn expectation(&self, obs: &DenseMatrix<T>) -> Result<T> {
        DensityMatrix::expectation(self, obs)
    }
    fn variance(&self, obs: &DenseMatrix<T>) -> Result<T> {
        DensityMatrix::variance(self, obs)
    }
}

/// `(|0...0> + |1...1>) / sqrt(2)` for `2 <= n <= 6`.
pub fn ghz_state<T: Real>(n: usize) -> Result<PureState<T>> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCount { n, min: 2, max: MAX_QUBITS });
    }
    let dim = 1usize << n;
    let mut amps = vec![zero::<T>(); dim];
    let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    amps[0] = h;
    amps[dim - 1] = h;
    PureState::new(amps)
}

pub fn expectation<T: Real>(state: &DensityMatrix<T>, obs: &DenseMatrix<T>) -> Result<T> {
    state.expectation(obs)
}

pub fn variance<T: Real>(state: &DensityMatrix<T>, obs: &DenseMatrix<T>) -> Result<T> {
    state.variance(obs)
}

pub fn fidelity_with_pure<T: Real>(rho: &DensityMatrix<T>, psi: &PureState<T>) -> Result<T> {
    rho.fidelity_with_pure(psi)
}
