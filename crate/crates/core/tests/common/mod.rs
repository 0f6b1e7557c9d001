#![allow(dead_code)]

use entsig::quantum::{DenseMatrix, DensityMatrix, PureState};
use num_complex::Complex;
use proptest::prelude::*;

pub fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex<f64>>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex::new(re, im)).collect())
}

/// Normalized random pure state on `n` qubits.
pub fn pure_state(n: usize) -> impl Strategy<Value = PureState<f64>> {
    complex_vec(1 << n)
        .prop_filter("non-zero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|v| PureState::normalized(v).unwrap())
}

/// `A A^dagger / tr` for a random square `A`.
pub fn density(n: usize) -> impl Strategy<Value = DensityMatrix<f64>> {
    let dim = 1 << n;
    complex_vec(dim * dim).prop_filter_map("full trace", move |v| {
        let rows = v.chunks(dim).map(<[_]>::to_vec).collect();
        let a = DenseMatrix::from_rows(rows).ok()?;
        let mut m = &a * &a.adjoint();
        let tr = m.trace().re;
        if tr < 1e-3 {
            return None;
        }
        m = m.scale(1.0 / tr);
        m.symmetrize();
        DensityMatrix::new(m).ok()
    })
}

pub fn hermitian(dim: usize) -> impl Strategy<Value = DenseMatrix<f64>> {
    complex_vec(dim * dim).prop_map(move |v| {
        let a = DenseMatrix::from_rows(v.chunks(dim).map(<[_]>::to_vec).collect()).unwrap();
        let mut h = &a + &a.adjoint();
        h.symmetrize();
        h
    })
}
