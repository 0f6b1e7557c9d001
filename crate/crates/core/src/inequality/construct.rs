//! Mermin and Ardehali inequalities from the expansion of `prod_k (X_k + i Y_k)`.
//!
//! Writing `E + iO = (X + iY)^(x)m`, the Mermin operator on `n` qubits is `E`
//! (m = n) and the Ardehali operator is `((E - O) (x) A + (E + O) (x) B) / sqrt2`
//! (m = n - 1) with `A = (X + Y)/sqrt2`, `B = (X - Y)/sqrt2`. Every product
//! term is measured in its own setting.

use super::{BellInequality, MeasurementSetting};
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, ProductObservable};
use crate::scalar::Real;

/// Terms of `(X + iY)^(x)m` as `(Re, Im, label)` with `Re + i Im = i^(#Y)`.
fn xy_expansion(m: usize) -> Vec<(i32, i32, String)> {
    (0..1usize << m)
        .map(|mask| {
            let label: String = (0..m)
                .map(|k| if (mask >> (m - 1 - k)) & 1 == 1 { 'Y' } else { 'X' })
                .collect();
            let (re, im) = match mask.count_ones() % 4 {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            (re, im, label)
        })
        .collect()
}

fn one_term_per_setting<T: Real>(
    name: &str,
    terms: Vec<(T, String)>,
    lhv_bound: Option<T>,
) -> Result<BellInequality<T>> {
    let mut settings = Vec::with_capacity(terms.len());
    let mut products = Vec::with_capacity(terms.len());
    for (c, label) in &terms {
        settings.push(MeasurementSetting::parse(label)?);
        products.push(ProductObservable::parse(*c, label)?);
    }
    let assignment: Vec<usize> = (0..terms.len()).collect();
    let coeffs = super::grouped_coefficients(&settings, &products, &assignment)?;
    match lhv_bound {
        Some(b) => BellInequality::new(name, settings, coeffs, b),
        None => BellInequality::with_bruteforce_bound(name, settings, coeffs),
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 4 || n == 6 {
        Ok(())
    } else {
        Err(Error::UnsupportedQubitCount(n))
    }
}

/// Mermin inequality for `n` = 4 (bound 4) or 6 (bound by enumeration).
pub fn mermin<T: Real>(n: usize) -> Result<BellInequality<T>> {
    check_n(n)?;
    let terms = xy_expansion(n)
        .into_iter()
        .filter(|(re, _, _)| *re != 0)
        .map(|(re, _, label)| (T::from_i32(re).expect("sign"), label))
        .collect();
    let bound = (n == 4).then(|| T::lit(4.0));
    one_term_per_setting(&format!("mermin{n}"), terms, bound)
}

/// Ardehali inequality for `n` = 4 (bound `2 sqrt2`) or 6 (bound by enumeration).
pub fn ardehali<T: Real>(n: usize) -> Result<BellInequality<T>> {
    check_n(n)?;
    let h = T::FRAC_1_SQRT_2();
    let mut terms = Vec::with_capacity(1 << n);
    for (re, im, label) in xy_expansion(n - 1) {
        let a = T::from_i32(re - im).expect("sign") * h;
        let b = T::from_i32(re + im).expect("sign") * h;
        terms.push((a, format!("{label}A")));
        terms.push((b, format!("{label}B")));
    }
    let bound = (n == 4).then(|| T::lit(2.0) * T::SQRT_2());
    one_term_per_setting(&format!("ardehali{n}"), terms, bound)
}

/// `F = (<|0..0><0..0|> + <|1..1><1..1|>)/2 + <B_M>/2^n`, which equals the
/// GHZ fidelity for any state.
pub fn ghz_fidelity_formula<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let n = rho.n_qubits();
    check_n(n)?;
    let bm = mermin::<T>(n)?.expectation(rho)?;
    let last = rho.dim() - 1;
    let diag = rho.matrix()[(0, 0)].re + rho.matrix()[(last, last)].re;
    Ok(diag * T::lit(0.5) + bm / T::from_usize(rho.dim()).expect("small dimension"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ghz_state;

    fn coeff_of(ineq: &BellInequality<f64>, label: &str) -> f64 {
        let s = ineq.setting_index(label).unwrap();
        // outcome 0 (all +1) carries the bare term coefficient
        ineq.outcome_coeffs()[s][0]
    }

    #[test]
    fn mermin4_structure() {
        let m = mermin::<f64>(4).unwrap();
        assert_eq!(m.settings().len(), 8);
        assert_eq!(coeff_of(&m, "XXXX"), 1.0);
        assert_eq!(coeff_of(&m, "YYYY"), 1.0);
        for label in ["XXYY", "XYXY", "XYYX", "YXXY", "YXYX", "YYXX"] {
            assert_eq!(coeff_of(&m, label), -1.0, "{label}");
        }
        assert_eq!(m.lhv_bound(), 4.0);
    }

    #[test]
    fn ardehali4_structure() {
        let a = ardehali::<f64>(4).unwrap();
        assert_eq!(a.settings().len(), 16);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [
            ("XXXA", h), ("XXXB", h),
            ("XYYA", -h), ("YXYA", -h), ("YYXA", -h),
            ("XYYB", -h), ("YXYB", -h), ("YYXB", -h),
            ("XXYA", -h), ("XYXA", -h), ("YXXA", -h),
            ("XXYB", h), ("XYXB", h), ("YXXB", h),
            ("YYYA", h), ("YYYB", -h),
        ];
        for (label, c) in expect {
            assert!((coeff_of(&a, label) - c).abs() < 1e-15, "{label}");
        }
        assert!((a.lhv_bound() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ghz_values() {
        for n in [4, 6] {
            let g = ghz_state::<f64>(n).unwrap().density();
            let full = (1 << (n - 1)) as f64;
            assert!((mermin::<f64>(n).unwrap().expectation(&g).unwrap() - full).abs() < 1e-9);
            assert!((ardehali::<f64>(n).unwrap().expectation(&g).unwrap() - full).abs() < 1e-9);
        }
    }

    #[test]
    fn six_qubit_sizes() {
        assert_eq!(mermin::<f64>(6).unwrap().settings().len(), 32);
        assert_eq!(ardehali::<f64>(6).unwrap().settings().len(), 64);
    }

    #[test]
    fn unsupported_sizes() {
        assert_eq!(mermin::<f64>(5).unwrap_err(), Error::UnsupportedQubitCount(5));
        assert_eq!(ardehali::<f64>(3).unwrap_err(), Error::UnsupportedQubitCount(3));
        let bell = ghz_state::<f64>(2).unwrap().density();
        assert!(ghz_fidelity_formula(&bell).is_err());
    }

    #[test]
    fn fidelity_formula_examples() {
        let g = ghz_state::<f64>(4).unwrap().density();
        assert!((ghz_fidelity_formula(&g).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::<f64>::maximally_mixed(4).unwrap();
        assert!((ghz_fidelity_formula(&mixed).unwrap() - 1.0 / 16.0).abs() < 1e-12);
    }
}
