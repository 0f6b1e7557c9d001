//! Dense linear algebra on `2^n`-dimensional state spaces.

pub mod eig;
pub mod matrix;
pub mod observable;
pub mod state;

pub use eig::{hermitian_eig, HermitianEig};
pub use matrix::DenseMatrix;
pub use observable::{pauli, ProductObservable, SingleQubitObservable};
pub use state::{expectation, fidelity_with_pure, ghz_state, variance, DensityMatrix, PureState, QuantumState};

/// `a (x) b`.
pub fn tensor<T: crate::Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    a.tensor(b)
}
