//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary and then applies the classical real Jacobi rotation, so
//! the composite `U = D R` zeroes `a[p][q]` while keeping the matrix
//! Hermitian. Sweeps repeat until the off-diagonal Frobenius norm drops
//! below `eig_offdiag * ||m||_F`.

use num_complex::Complex;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEig<T> {
    pub values: Vec<T>,
    pub vectors: DenseMatrix<T>,
}

impl<T: Real> HermitianEig<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    pub fn min_value(&self) -> T {
        self.values[0]
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let n = self.values.len();
        let mut out = DenseMatrix::zeros(n);
        for k in 0..n {
            let v = self.vector(k);
            for i in 0..n {
                let vi = v[i] * self.values[k];
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + vi * v[j].conj();
                }
            }
        }
        out
    }
}

fn off_diagonal_norm<T: Real>(a: &DenseMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix with the scalar's default tolerances.
pub fn hermitian_eig<T: Real>(m: &DenseMatrix<T>) -> Result<HermitianEig<T>> {
    let dev = m.hermitian_deviation();
    if dev > T::lit(T::TOL.eig_input) {
        return Err(Error::NotHermitian(dev.as_f64()));
    }
    let n = m.dim();
    let mut a = m.clone();
    a.symmetrize();
    let mut v = DenseMatrix::identity(n);
    let threshold = T::lit(T::TOL.eig_offdiag) * m.frobenius_norm();
    let zero = Complex::new(T::zero(), T::zero());

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                // Phase e^{-i phi} on column q makes the pivot real and equal to r.
                let phase = apq.conj() / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (r + r);
                let t = {
                    let mag = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() { -mag } else { mag }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // Columns p and q of U = D R.
                let u_pp = Complex::new(c, T::zero());
                let u_qp = phase * (-s);
                let u_pq = Complex::new(s, T::zero());
                let u_qq = phase * c;

                // A <- A U
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                // A <- U^dagger A
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
                // V <- V U
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = DenseMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)];
        }
    }
    Ok(HermitianEig { values, vectors })
}
