use std::fmt;

use num_complex::Complex;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A 2x2 Hermitian observable with `O^2 = 1`, i.e. spectrum within `{+1, -1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitObservable<T> {
    matrix: DenseMatrix<T>,
    label: String,
}

impl<T: Real> SingleQubitObservable<T> {
    pub fn new(matrix: DenseMatrix<T>, label: impl Into<String>) -> Result<Self> {
        if matrix.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: matrix.dim() });
        }
        let dev = matrix.hermitian_deviation();
        if dev > T::lit(T::TOL.hermitian) {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        let square_dev = (&matrix * &matrix).max_abs_diff(&DenseMatrix::identity(2));
        if square_dev > T::lit(T::TOL.dichotomic) {
            return Err(Error::NotDichotomic(square_dev.as_f64()));
        }
        Ok(SingleQubitObservable { matrix, label: label.into() })
    }

    /// Parses one of `I, X, Y, Z`, plus `A = (X+Y)/sqrt2` and `B = (X-Y)/sqrt2`.
    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "I" | "X" | "Y" | "Z" => pauli(label),
            "A" => Ok(Self::rotated_xy(T::one(), "A")),
            "B" => Ok(Self::rotated_xy(-T::one(), "B")),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }

    /// `(X + sign*Y) / sqrt(2)`.
    fn rotated_xy(sign: T, label: &str) -> Self {
        let h = T::FRAC_1_SQRT_2();
        let mut m = DenseMatrix::zeros(2);
        m[(0, 1)] = Complex::new(h, -sign * h);
        m[(1, 0)] = Complex::new(h, sign * h);
        SingleQubitObservable { matrix: m, label: label.to_string() }
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Eigenprojector `(1 + sign*O)/2` for `sign = +1` (outcome bit 0) or `-1` (bit 1).
    pub fn projector(&self, outcome_bit: usize) -> DenseMatrix<T> {
        let sign = if outcome_bit == 0 { T::one() } else { -T::one() };
        let half = T::lit(0.5);
        (&DenseMatrix::identity(2) + &self.matrix.scale(sign)).scale(half)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.matrix.max_abs_diff(&other.matrix) <= T::lit(T::TOL.dichotomic)
    }
}

/// Standard Pauli matrix or identity for labels `I, X, Y, Z`.
pub fn pauli<T: Real>(label: &str) -> Result<SingleQubitObservable<T>> {
    let (o, z) = (T::one(), T::zero());
    let c = Complex::new;
    let rows = match label {
        "I" => [[c(o, z), c(z, z)], [c(z, z), c(o, z)]],
        "X" => [[c(z, z), c(o, z)], [c(o, z), c(z, z)]],
        "Y" => [[c(z, z), c(z, -o)], [c(z, o), c(z, z)]],
        "Z" => [[c(o, z), c(z, z)], [c(z, z), c(-o, z)]],
        other => return Err(Error::UnknownLabel(other.to_string())),
    };
    let m = DenseMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())?;
    Ok(SingleQubitObservable { matrix: m, label: label.to_string() })
}

/// `coefficient * O_1 (x) ... (x) O_n`, with `None` standing for the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductObservable<T> {
    pub coefficient: T,
    pub factors: Vec<Option<SingleQubitObservable<T>>>,
}

impl<T: Real> ProductObservable<T> {
    pub fn new(coefficient: T, factors: Vec<Option<SingleQubitObservable<T>>>) -> Self {
        ProductObservable { coefficient, factors }
    }

    /// Parses a label string such as `"XXYY"` or `"ZI"`, where `I` is an identity factor.
    pub fn parse(coefficient: T, labels: &str) -> Result<Self> {
        let factors = labels
            .chars()
            .map(|ch| match ch {
                'I' => Ok(None),
                other => SingleQubitObservable::from_label(&other.to_string()).map(Some),
            })
            .collect::<Result<_>>()?;
        Ok(ProductObservable { coefficient, factors })
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    /// Qubits carrying a non-identity factor.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().enumerate().filter_map(|(k, f)| f.as_ref().map(|_| k))
    }

    pub fn label(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.as_ref().map_or("I", |o| o.label()))
            .collect()
    }

    /// Full `2^n x 2^n` matrix.
    pub fn matrix(&self) -> DenseMatrix<T> {
        let id = DenseMatrix::identity(2);
        let mats: Vec<&DenseMatrix<T>> = self
            .factors
            .iter()
            .map(|f| f.as_ref().map_or(&id, |o| o.matrix()))
            .collect();
        DenseMatrix::tensor_all(mats).scale(self.coefficient)
    }
}

impl<T: Real> fmt::Display for ProductObservable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.coefficient, self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Obs = SingleQubitObservable<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn pauli_matrices() {
        let x = pauli::<f64>("X").unwrap();
        assert_eq!(x.matrix().row(0), &[c(0.0, 0.0), c(1.0, 0.0)]);
        let z = pauli::<f64>("Z").unwrap();
        assert_eq!(z.matrix().row(1), &[c(0.0, 0.0), c(-1.0, 0.0)]);
        let y = pauli::<f64>("Y").unwrap();
        assert_eq!(y.matrix().row(0), &[c(0.0, 0.0), c(0.0, -1.0)]);
        assert_eq!(y.matrix().row(1), &[c(0.0, 1.0), c(0.0, 0.0)]);
    }

    #[test]
    fn unknown_label_rejected() {
        assert_eq!(pauli::<f64>("Q"), Err(Error::UnknownLabel("Q".into())));
        assert!(Obs::from_label("W").is_err());
    }

    #[test]
    fn every_observable_squares_to_identity() {
        for l in ["I", "X", "Y", "Z", "A", "B"] {
            let o = Obs::from_label(l).unwrap();
            let sq = o.matrix() * o.matrix();
            assert!(sq.max_abs_diff(&DenseMatrix::identity(2)) < 1e-10, "{l}");
        }
    }

    #[test]
    fn rotated_observables_are_xy_combinations() {
        let x = pauli::<f64>("X").unwrap();
        let y = pauli::<f64>("Y").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = (&x.matrix().scale(h)) + &y.matrix().scale(h);
        let b = (&x.matrix().scale(h)) - &y.matrix().scale(h);
        assert!(Obs::from_label("A").unwrap().matrix().max_abs_diff(&a) < 1e-15);
        assert!(Obs::from_label("B").unwrap().matrix().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn non_dichotomic_rejected() {
        let m = DenseMatrix::from_diagonal(&[1.0, 0.5]);
        assert!(matches!(Obs::new(m, "bad"), Err(Error::NotDichotomic(_))));
    }

    #[test]
    fn projectors_sum_to_identity() {
        let a = Obs::from_label("A").unwrap();
        let sum = &a.projector(0) + &a.projector(1);
        assert!(sum.max_abs_diff(&DenseMatrix::identity(2)) < 1e-15);
        let diff = &a.projector(0) - &a.projector(1);
        assert!(diff.max_abs_diff(a.matrix()) < 1e-15);
    }

    #[test]
    fn product_parse_and_matrix() {
        let t = ProductObservable::<f64>::parse(2.0, "ZI").unwrap();
        assert_eq!(t.support().collect::<Vec<_>>(), vec![0]);
        assert_eq!(t.matrix(), DenseMatrix::from_diagonal(&[2.0, 2.0, -2.0, -2.0]));
        assert_eq!(t.label(), "ZI");
    }
}
