//! Single-qubit Kraus channels, global white noise and the experimental
//! initial-state model.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{hermitian_eig, pauli, DenseMatrix, DensityMatrix};
use crate::scalar::Real;

fn check_probability<T: Real>(name: &'static str, p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::Probability { name, value: p.as_f64() });
    }
    Ok(())
}

/// Completely positive trace-preserving map on one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitChannel<T> {
    kraus: Vec<DenseMatrix<T>>,
}

impl<T: Real> SingleQubitChannel<T> {
    pub fn new(kraus: Vec<DenseMatrix<T>>) -> Result<Self> {
        if let Some(k) = kraus.iter().find(|k| k.dim() != 2) {
            return Err(Error::DimensionMismatch { expected: 2, found: k.dim() });
        }
        let sum = kraus
            .iter()
            .fold(DenseMatrix::zeros(2), |acc, k| &acc + &(&k.adjoint() * k));
        let dev = sum.max_abs_diff(&DenseMatrix::identity(2));
        if dev > T::lit(T::TOL.dichotomic) {
            return Err(Error::NotTracePreserving(dev.as_f64()));
        }
        Ok(SingleQubitChannel { kraus })
    }

    pub fn identity() -> Self {
        SingleQubitChannel { kraus: vec![DenseMatrix::identity(2)] }
    }

    pub fn kraus_operators(&self) -> &[DenseMatrix<T>] {
        &self.kraus
    }
}

/// Kraus operators `{sqrt(1-p) 1, sqrt(p) X}`.
pub fn bit_flip_channel<T: Real>(p: T) -> Result<SingleQubitChannel<T>> {
    check_probability("p", p)?;
    let x = pauli::<T>("X")?;
    SingleQubitChannel::new(vec![
        DenseMatrix::identity(2).scale((T::one() - p).sqrt()),
        x.matrix().scale(p.sqrt()),
    ])
}

/// `sum_K K_q rho K_q^dagger` with `K_q` acting on `qubit` (0 = first qubit).
pub fn apply_local<T: Real>(
    rho: &DensityMatrix<T>,
    channel: &SingleQubitChannel<T>,
    qubit: usize,
) -> Result<DensityMatrix<T>> {
    let n = rho.n_qubits();
    if qubit >= n {
        return Err(Error::QubitIndex { index: qubit, n_qubits: n });
    }
    let mut out = DenseMatrix::zeros(rho.dim());
    for k in channel.kraus_operators() {
        let term = rho
            .matrix()
            .apply_local_left(k, qubit, n)
            .apply_local_right_adjoint(k, qubit, n);
        out = &out + &term;
    }
    DensityMatrix::from_channel_output(out, n)
}

/// Independent bit flips with probability `p` on every qubit.
pub fn bit_flip_all<T: Real>(rho: &DensityMatrix<T>, p: T) -> Result<DensityMatrix<T>> {
    let ch = bit_flip_channel(p)?;
    (0..rho.n_qubits()).try_fold(rho.clone(), |acc, q| apply_local(&acc, &ch, q))
}

/// `(1 - q) rho + q 1 / 2^n`.
pub fn white_noise<T: Real>(rho: &DensityMatrix<T>, q: T) -> Result<DensityMatrix<T>> {
    check_probability("q", q)?;
    let dim = rho.dim();
    let mixed = DenseMatrix::identity(dim).scale(q / T::from_usize(dim).expect("small dimension"));
    let out = &rho.matrix().scale(T::one() - q) + &mixed;
    DensityMatrix::from_channel_output(out, rho.n_qubits())
}

/// Parameters of `alpha|0000><0000| + beta|1111><1111| + gamma(|0000><1111| + h.c.) + lambda/16 * 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentalAnsatzParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
}

impl ExperimentalAnsatzParams {
    /// Values fitted to the four-photon experiment.
    pub const EXPERIMENT: ExperimentalAnsatzParams =
        ExperimentalAnsatzParams { alpha: 0.362, beta: 0.522, gamma: 0.398, lambda: 0.12 };

    /// Trace before renormalization, `alpha + beta + lambda`.
    pub fn raw_trace(&self) -> f64 {
        self.alpha + self.beta + self.lambda
    }
}

impl Default for ExperimentalAnsatzParams {
    fn default() -> Self {
        Self::EXPERIMENT
    }
}

/// Builds the four-qubit model state divided by its raw trace.
pub fn experimental_ansatz<T: Real>(params: &ExperimentalAnsatzParams) -> Result<DensityMatrix<T>> {
    let vals = [params.alpha, params.beta, params.gamma, params.lambda];
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let trace = params.raw_trace();
    if !(trace > 0.0) {
        return Err(Error::BadTrace(trace));
    }
    let mut m = DenseMatrix::<T>::identity(16).scale(T::lit(params.lambda / 16.0));
    let add = |m: &mut DenseMatrix<T>, i, j, v: f64| m[(i, j)] = m[(i, j)] + Complex::new(T::lit(v), T::zero());
    add(&mut m, 0, 0, params.alpha);
    add(&mut m, 15, 15, params.beta);
    add(&mut m, 0, 15, params.gamma);
    add(&mut m, 15, 0, params.gamma);
    let m = m.scale(T::one() / T::lit(trace));
    let min = hermitian_eig(&m)?.min_value();
    if min < -T::lit(T::TOL.psd) {
        return Err(Error::NotPsd(min.as_f64()));
    }
    DensityMatrix::new(m)
}
