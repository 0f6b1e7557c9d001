//! Bell inequalities and witnesses.
//!
//! An inequality is stored in measured form: a list of settings (one
//! dichotomic observable per qubit) and, for every setting, the coefficient
//! `lambda[o]` attached to each of the `2^n` joint outcomes. Outcome index bit
//! `k` (qubit 1 is the most significant bit) is 0 for the `+1` eigenvalue and
//! 1 for `-1`. The expectation value is `sum_s sum_o lambda[s][o] p[s][o]`.

mod construct;
mod json;
mod lhv;
mod probabilities;
mod witness;

use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{DenseMatrix, DensityMatrix, ProductObservable, SingleQubitObservable};
use crate::scalar::Real;

pub use construct::{ardehali, ghz_fidelity_formula, mermin};
pub use json::{InequalityFile, SettingEntry};
pub use lhv::lhv_bound_bruteforce;
pub use probabilities::outcome_probabilities;
pub use witness::{witness_violation, Witness};

/// Sign `(-1)^bit` of qubit `k` in outcome `o`.
#[inline]
pub(crate) fn outcome_sign(o: usize, k: usize, n: usize) -> i32 {
    if (o >> (n - 1 - k)) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// One dichotomic observable per qubit, measured jointly in the product eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting<T> {
    observables: Vec<SingleQubitObservable<T>>,
    label: String,
}

impl<T: Real> MeasurementSetting<T> {
    pub fn new(observables: Vec<SingleQubitObservable<T>>) -> Self {
        let label = observables.iter().map(|o| o.label()).collect();
        MeasurementSetting { observables, label }
    }

    /// Parses a label such as `"XXYA"`.
    pub fn parse(label: &str) -> Result<Self> {
        let observables = label
            .chars()
            .map(|c| SingleQubitObservable::from_label(&c.to_string()))
            .collect::<Result<Vec<_>>>()?;
        if observables.is_empty() {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        Ok(Self::new(observables))
    }

    pub fn n_qubits(&self) -> usize {
        self.observables.len()
    }

    pub fn observables(&self) -> &[SingleQubitObservable<T>] {
        &self.observables
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_outcomes(&self) -> usize {
        1 << self.n_qubits()
    }

    /// Product of eigenprojectors for outcome `o`.
    pub fn outcome_projector(&self, o: usize) -> DenseMatrix<T> {
        let n = self.n_qubits();
        let projs: Vec<DenseMatrix<T>> = self
            .observables
            .iter()
            .enumerate()
            .map(|(k, obs)| obs.projector((o >> (n - 1 - k)) & 1))
            .collect();
        DenseMatrix::tensor_all(&projs)
    }
}

/// `<B> <= lhv_bound` in measured form.
#[derive(Debug, Clone, PartialEq)]
pub struct BellInequality<T> {
    name: String,
    n_qubits: usize,
    settings: Vec<MeasurementSetting<T>>,
    coeffs: Vec<Vec<T>>,
    lhv_bound: T,
}

impl<T: Real> BellInequality<T> {
    pub fn new(
        name: impl Into<String>,
        settings: Vec<MeasurementSetting<T>>,
        coeffs: Vec<Vec<T>>,
        lhv_bound: T,
    ) -> Result<Self> {
        let n_qubits = settings.first().ok_or(Error::EmptyInequality)?.n_qubits();
        if settings.len() != coeffs.len() {
            return Err(Error::Schema(format!(
                "{} settings but {} coefficient vectors",
                settings.len(),
                coeffs.len()
            )));
        }
        for (s, c) in settings.iter().zip(&coeffs) {
            if s.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch { expected: n_qubits, found: s.n_qubits() });
            }
            if c.len() != s.n_outcomes() {
                return Err(Error::CountLength {
                    setting: s.label().to_string(),
                    expected: s.n_outcomes(),
                    found: c.len(),
                });
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(BellInequality { name: name.into(), n_qubits, settings, coeffs, lhv_bound })
    }

    /// Builds an inequality whose bound is found by enumerating deterministic
    /// local assignments.
    pub fn with_bruteforce_bound(
        name: impl Into<String>,
        settings: Vec<MeasurementSetting<T>>,
        coeffs: Vec<Vec<T>>,
    ) -> Result<Self> {
        let mut ineq = Self::new(name, settings, coeffs, T::zero())?;
        ineq.lhv_bound = lhv_bound_bruteforce(&ineq)?;
        Ok(ineq)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn settings(&self) -> &[MeasurementSetting<T>] {
        &self.settings
    }

    pub fn outcome_coeffs(&self) -> &[Vec<T>] {
        &self.coeffs
    }

    pub fn lhv_bound(&self) -> T {
        self.lhv_bound
    }

    pub fn setting_index(&self, label: &str) -> Option<usize> {
        self.settings.iter().position(|s| s.label() == label)
    }

    /// `<B>` from the outcome distributions of every setting.
    pub fn expectation(&self, rho: &DensityMatrix<T>) -> Result<T> {
        self.check_state(rho)?;
        let mut total = T::zero();
        for (setting, coeffs) in self.settings.iter().zip(&self.coeffs) {
            let probs = outcome_probabilities(rho, setting)?;
            total = total + coeffs.iter().zip(&probs).map(|(&l, &p)| l * p).sum::<T>();
        }
        Ok(total)
    }

    /// `B = sum_s sum_o lambda[s][o] Pi[s][o]` as an explicit matrix.
    pub fn operator(&self) -> DenseMatrix<T> {
        let dim = 1 << self.n_qubits;
        let mut b = DenseMatrix::zeros(dim);
        for (setting, coeffs) in self.settings.iter().zip(&self.coeffs) {
            for (o, &l) in coeffs.iter().enumerate() {
                if l != T::zero() {
                    b = &b + &setting.outcome_projector(o).scale(l);
                }
            }
        }
        b
    }

    pub(crate) fn check_state(&self, rho: &DensityMatrix<T>) -> Result<()> {
        if rho.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << self.n_qubits, found: rho.dim() });
        }
        Ok(())
    }
}

impl<T: Real> fmt::Display for BellInequality<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} qubits, {} settings, bound {})",
            self.name,
            self.n_qubits,
            self.settings.len(),
            self.lhv_bound
        )
    }
}

/// Measured form of `sum_t c_t P_t` where term `t` is read out in setting
/// `assignment[t]`. Every non-identity factor of a term must equal the
/// setting's observable on that qubit.
pub fn generic_inequality<T: Real>(
    name: impl Into<String>,
    settings: Vec<MeasurementSetting<T>>,
    terms: &[ProductObservable<T>],
    assignment: &[usize],
    lhv_bound: T,
) -> Result<BellInequality<T>> {
    let coeffs = grouped_coefficients(&settings, terms, assignment)?;
    BellInequality::new(name, settings, coeffs, lhv_bound)
}

pub(crate) fn grouped_coefficients<T: Real>(
    settings: &[MeasurementSetting<T>],
    terms: &[ProductObservable<T>],
    assignment: &[usize],
) -> Result<Vec<Vec<T>>> {
    if terms.len() != assignment.len() {
        return Err(Error::Schema(format!(
            "{} terms but {} setting assignments",
            terms.len(),
            assignment.len()
        )));
    }
    let mut coeffs: Vec<Vec<T>> = settings.iter().map(|s| vec![T::zero(); s.n_outcomes()]).collect();
    for (term, &s) in terms.iter().zip(assignment) {
        let setting = settings.get(s).ok_or(Error::NoSuchSetting(s))?;
        let n = setting.n_qubits();
        if term.n_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: term.n_qubits() });
        }
        let diagonal = term
            .factors
            .iter()
            .zip(setting.observables())
            .all(|(f, obs)| f.as_ref().is_none_or(|f| f.same_as(obs)));
        if !diagonal {
            return Err(Error::TermNotDiagonal { term: term.label(), setting: setting.label().to_string() });
        }
        let support: Vec<usize> = term.support().collect();
        for (o, slot) in coeffs[s].iter_mut().enumerate() {
            let sign: i32 = support.iter().map(|&k| outcome_sign(o, k, n)).product();
            *slot = *slot + term.coefficient * T::from_i32(sign).expect("sign");
        }
    }
    Ok(coeffs)
}

/// `<B> - C_lhv`.
pub fn violation<T: Real>(rho: &DensityMatrix<T>, ineq: &BellInequality<T>) -> Result<T> {
    Ok(ineq.expectation(rho)? - ineq.lhv_bound())
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = MeasurementSetting<f64>;

    #[test]
    fn correlation_example_coefficients() {
        let (alpha, beta, gamma) = (0.3, -1.1, 2.5);
        let terms = vec![
            ProductObservable::parse(alpha, "ZZ").unwrap(),
            ProductObservable::parse(beta, "ZI").unwrap(),
            ProductObservable::parse(gamma, "IZ").unwrap(),
        ];
        let ineq = generic_inequality("M", vec![S::parse("ZZ").unwrap()], &terms, &[0, 0, 0], 0.0).unwrap();
        let l = &ineq.outcome_coeffs()[0];
        let expect = [
            alpha + beta + gamma,
            -alpha + beta - gamma,
            -alpha - beta + gamma,
            alpha - beta - gamma,
        ];
        for (a, b) in l.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn parity_and_identity_terms() {
        let zz = generic_inequality(
            "zz",
            vec![S::parse("ZZ").unwrap()],
            &[ProductObservable::parse(1.0, "ZZ").unwrap()],
            &[0],
            0.0,
        )
        .unwrap();
        assert_eq!(zz.outcome_coeffs()[0], vec![1.0, -1.0, -1.0, 1.0]);
        let shift = generic_inequality(
            "id",
            vec![S::parse("XY").unwrap()],
            &[ProductObservable::parse(0.7, "II").unwrap()],
            &[0],
            0.0,
        )
        .unwrap();
        assert_eq!(shift.outcome_coeffs()[0], vec![0.7; 4]);
    }

    #[test]
    fn off_diagonal_term_rejected() {
        let err = generic_inequality(
            "bad",
            vec![S::parse("ZZ").unwrap()],
            &[ProductObservable::parse(1.0, "XZ").unwrap()],
            &[0],
            0.0,
        )
        .unwrap_err();
        assert_eq!(err, Error::TermNotDiagonal { term: "XZ".into(), setting: "ZZ".into() });
    }

    #[test]
    fn coefficient_length_validated() {
        let err = BellInequality::new("x", vec![S::parse("ZZ").unwrap()], vec![vec![1.0; 3]], 0.0).unwrap_err();
        assert!(matches!(err, Error::CountLength { expected: 4, found: 3, .. }));
        assert_eq!(BellInequality::<f64>::new("x", vec![], vec![], 0.0).unwrap_err(), Error::EmptyInequality);
    }
}
