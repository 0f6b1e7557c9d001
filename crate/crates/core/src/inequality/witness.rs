use crate::error::{Error, Result};
use crate::quantum::{ghz_state, DenseMatrix, QuantumState};
use crate::scalar::Real;

/// Hermitian observable with non-negative expectation on separable states.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    name: String,
    matrix: DenseMatrix<T>,
}

impl<T: Real> Witness<T> {
    pub fn new(name: impl Into<String>, matrix: DenseMatrix<T>) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if dev > T::lit(T::TOL.hermitian) {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        Ok(Witness { name: name.into(), matrix })
    }

    /// `1/2 - |GHZ_n><GHZ_n|`.
    pub fn ghz_projector(n: usize) -> Result<Self> {
        let ghz = ghz_state::<T>(n)?;
        let w = &DenseMatrix::identity(1 << n).scale(T::lit(0.5)) - &ghz.projector();
        Self::new(format!("ghz{n}-projector"), w)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// `-<W>`.
pub fn witness_violation<T: Real, S: QuantumState<T>>(state: &S, w: &Witness<T>) -> Result<T> {
    Ok(-state.expectation(w.matrix())?)
}
