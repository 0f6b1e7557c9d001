use num_complex::Complex;

use super::MeasurementSetting;
use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;
use crate::scalar::Real;

/// `p[o] = tr(rho Pi[o])` for every joint outcome of `setting`.
///
/// The qubits are traced out one at a time from the least significant end:
/// each step contracts the (row, column) index pair of one qubit with the
/// two eigenprojectors of that qubit's observable and appends the outcome
/// bit. Total cost is `O(4^n)` instead of `O(8^n)` for explicit projectors.
pub fn outcome_probabilities<T: Real>(
    rho: &DensityMatrix<T>,
    setting: &MeasurementSetting<T>,
) -> Result<Vec<T>> {
    let n = rho.n_qubits();
    if setting.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: setting.n_outcomes() });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut work: Vec<Complex<T>> = rho.matrix().as_slice().to_vec();
    let mut remaining = 1usize << n;
    let mut outcomes = 1usize;
    for k in (0..n).rev() {
        let proj = [setting.observables()[k].projector(0), setting.observables()[k].projector(1)];
        let half = remaining / 2;
        let next_outcomes = outcomes * 2;
        let mut next = vec![zero; half * half * next_outcomes];
        for r in 0..half {
            for c in 0..half {
                for out in 0..outcomes {
                    let mut entries = [[zero; 2]; 2];
                    for (a, row) in entries.iter_mut().enumerate() {
                        for (b, e) in row.iter_mut().enumerate() {
                            *e = work[((2 * r + a) * remaining + (2 * c + b)) * outcomes + out];
                        }
                    }
                    for (s, p) in proj.iter().enumerate() {
                        let mut acc = zero;
                        for (a, row) in entries.iter().enumerate() {
                            for (b, e) in row.iter().enumerate() {
                                acc = acc + *e * p[(b, a)];
                            }
                        }
                        next[(r * half + c) * next_outcomes + s * outcomes + out] = acc;
                    }
                }
            }
        }
        work = next;
        remaining = half;
        outcomes = next_outcomes;
    }

    let clamp = T::lit(T::TOL.probability_clamp);
    let imag_tol = T::lit(T::TOL.imag_residue);
    work.into_iter()
        .map(|z| {
            if z.im.abs() > imag_tol {
                return Err(Error::NotHermitian(z.im.abs().as_f64()));
            }
            if z.re < -clamp {
                return Err(Error::NotPsd(z.re.as_f64()));
            }
            Ok(z.re.max(T::zero()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ghz_state;

    type S = MeasurementSetting<f64>;

    /// `tr(rho Pi_o)` with explicitly built projectors.
    fn explicit(rho: &DensityMatrix<f64>, setting: &S) -> Vec<f64> {
        (0..setting.n_outcomes())
            .map(|o| rho.matrix().trace_product(&setting.outcome_projector(o)).re)
            .collect()
    }

    #[test]
    fn ghz_in_z_basis() {
        let g = ghz_state::<f64>(4).unwrap().density();
        let p = outcome_probabilities(&g, &S::parse("ZZZZ").unwrap()).unwrap();
        for (o, &v) in p.iter().enumerate() {
            let expect = if o == 0 || o == 15 { 0.5 } else { 0.0 };
            assert!((v - expect).abs() < 1e-15, "{o}: {v}");
        }
    }

    #[test]
    fn ghz_in_x_basis_even_parity() {
        let g = ghz_state::<f64>(4).unwrap().density();
        let setting = S::parse("XXXX").unwrap();
        let p = outcome_probabilities(&g, &setting).unwrap();
        let oracle = explicit(&g, &setting);
        for o in 0..16usize {
            let expect = if o.count_ones() % 2 == 0 { 0.125 } else { 0.0 };
            assert!((p[o] - expect).abs() < 1e-15);
            assert!((oracle[o] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn mixed_state_uniform() {
        let m = DensityMatrix::<f64>::maximally_mixed(3).unwrap();
        let p = outcome_probabilities(&m, &S::parse("XAY").unwrap()).unwrap();
        assert!(p.iter().all(|&v| (v - 0.125).abs() < 1e-15));
    }

    #[test]
    fn matches_explicit_projectors_on_asymmetric_state() {
        let rho = crate::noise::experimental_ansatz::<f64>(&Default::default()).unwrap();
        let rho = crate::noise::bit_flip_all(&rho, 0.07).unwrap();
        for label in ["XXYB", "YXYA", "ZXYZ"] {
            let s = S::parse(label).unwrap();
            let p = outcome_probabilities(&rho, &s).unwrap();
            let q = explicit(&rho, &s);
            for (a, b) in p.iter().zip(&q) {
                assert!((a - b).abs() < 1e-14);
            }
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn wrong_size_rejected() {
        let g = ghz_state::<f64>(4).unwrap().density();
        assert!(outcome_probabilities(&g, &S::parse("XX").unwrap()).is_err());
    }
}
