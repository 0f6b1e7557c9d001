//! Raising the variance-model significance of a witness on a detected pure
//! state by adding a positive operator.
//!
//! For `W' = W + gamma P` with small `gamma`, the significance `-<W>/Delta(W)`
//! changes at first order by
//!
//! ```text
//! gamma <W> / (2 Delta^3) * [ <WP + PW> - 2 <W^2>/<W> <P> ]
//! ```
//!
//! which is `gamma <W>/(2 Delta^3) tr(Q P)` with
//! `Q = rho W + W rho - 2 <W^2>/<W> rho`. The best unit-trace `P` is the
//! projector on the lowest eigenvector of `Q`.
//!
//! The closed form uses `psi_perp = (1 - |psi><psi|) W psi / Delta`, so that
//! `W psi = <W> psi + Delta psi_perp`, and adds
//! `a |psi><psi| + b |psi_perp><psi_perp| - Delta (|psi><psi_perp| + h.c.)`.
//! With `a, b > 0` and `ab >= Delta^2` this is positive and makes `psi` an
//! eigenstate of `W'` with eigenvalue `<W> + a`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Constraint, Error, Result};
use crate::inequality::Witness;
use crate::quantum::{hermitian_eig, DenseMatrix, DensityMatrix, PureState};
use crate::scalar::Real;
use crate::significance::{variance_model_significance, Significance};

/// An improved witness and how it behaves on the target state.
#[derive(Debug, Clone)]
pub struct ImprovementResult<T> {
    pub improved_witness: Witness<T>,
    /// `W' - W`, positive semidefinite.
    pub added_operator: DenseMatrix<T>,
    pub diagnostics: ImprovementDiagnostics<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImprovementDiagnostics<T> {
    pub expectation_before: T,
    pub expectation_after: T,
    pub spread_before: T,
    pub spread_after: T,
    pub significance_before: Significance<T>,
    pub significance_after: Significance<T>,
    /// `|| W' psi - <W'> psi ||`.
    pub eigen_residual: T,
    pub added_min_eigenvalue: T,
}

/// `Q = rho W + W rho - 2 <W^2>/<W> rho`.
pub fn q_operator<T: Real>(rho: &DensityMatrix<T>, w: &Witness<T>) -> Result<DenseMatrix<T>> {
    check_dims(rho.dim(), w)?;
    let wm = w.matrix();
    let mean = rho.expectation(wm)?;
    if mean.abs() <= T::lit(T::TOL.degenerate_mean) {
        return Err(Error::DegenerateMean(mean.as_f64()));
    }
    let w2 = wm * wm;
    let second = rho.expectation(&w2)?;
    let rw = rho.matrix() * wm;
    let wr = wm * rho.matrix();
    let shift = rho.matrix().scale(T::lit(2.0) * second / mean);
    let mut q = &(&rw + &wr) - &shift;
    q.symmetrize();
    Ok(q)
}

/// Unit vector `(1 - |psi><psi|) W psi / Delta`, phased so that
/// `<psi|W|psi_perp> = Delta` is real and positive.
pub fn optimal_orthogonal_direction<T: Real>(psi: &PureState<T>, w: &Witness<T>) -> Result<PureState<T>> {
    check_dims(psi.dim(), w)?;
    let dev = psi.deviation_vector(w.matrix())?;
    let spread = norm(&dev);
    if spread <= T::lit(T::TOL.eigenstate_spread) {
        return Err(Error::AlreadyEigenstate(spread.as_f64()));
    }
    let inv = T::one() / spread;
    PureState::normalized(dev.into_iter().map(|z| z * inv).collect())
}

/// First-order rate `d S / d gamma` at `gamma = 0` for `W + gamma P`.
pub fn first_order_rate<T: Real>(psi: &PureState<T>, w: &Witness<T>, p: &DenseMatrix<T>) -> Result<T> {
    let (mean, spread) = detected_moments(psi, w)?;
    let wm = w.matrix();
    let sym = &(wm * p) + &(p * wm);
    let second = psi.expectation(&(wm * wm))?;
    let bracket = psi.expectation(&sym)? - T::lit(2.0) * second / mean * psi.expectation(p)?;
    Ok(mean / (T::lit(2.0) * spread.powi(3)) * bracket)
}

/// Adds `gamma |phi><phi|` with `phi` the lowest eigenvector of `Q`.
pub fn perturbative_step<T: Real>(psi: &PureState<T>, w: &Witness<T>, gamma: T) -> Result<ImprovementResult<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::NonPositiveGamma(gamma.as_f64()));
    }
    detected_moments(psi, w)?;
    let q = q_operator(&psi.density(), w)?;
    let eig = hermitian_eig(&q)?;
    let phi = eig.vector(0);
    let added = DenseMatrix::outer(&phi).scale(gamma);
    finish(psi, w, added, "perturbed")
}

/// Closed-form improvement with caller-chosen `a` and `b`.
///
/// Requires `a > 0`, `b > 0`, `ab >= Delta^2` and `a < -<W>`; every violated
/// condition is reported.
pub fn exact_improvement<T: Real>(psi: &PureState<T>, w: &Witness<T>, a: T, b: T) -> Result<ImprovementResult<T>> {
    let (mean, spread) = detected_moments(psi, w)?;
    let mut violated = Vec::new();
    if !(a > T::zero()) {
        violated.push(Constraint::NonPositiveA { a: a.as_f64() });
    }
    if !(b > T::zero()) {
        violated.push(Constraint::NonPositiveB { b: b.as_f64() });
    }
    let required = spread * spread;
    // relative slack so that b = Delta^2 / a passes despite rounding
    if !(a * b >= required * (T::one() - T::epsilon() * T::lit(8.0))) {
        violated.push(Constraint::ProductTooSmall { product: (a * b).as_f64(), required: required.as_f64() });
    }
    if !(a < -mean) {
        violated.push(Constraint::AbandonsDetection { a: a.as_f64(), limit: (-mean).as_f64() });
    }
    if !violated.is_empty() {
        return Err(Error::Constraints(violated));
    }
    let perp = optimal_orthogonal_direction(psi, w)?;
    let u = psi.amplitudes();
    let v = perp.amplitudes();
    let cross = &DenseMatrix::outer2(u, v) + &DenseMatrix::outer2(v, u);
    let added = &(&DenseMatrix::outer(u).scale(a) + &DenseMatrix::outer(v).scale(b)) - &cross.scale(spread);
    finish(psi, w, added, "improved")
}

/// [`exact_improvement`] with `a = -<W>/2` and `b = Delta^2 / a`.
pub fn exact_improvement_default<T: Real>(psi: &PureState<T>, w: &Witness<T>) -> Result<ImprovementResult<T>> {
    let (mean, spread) = detected_moments(psi, w)?;
    let (a, b) = default_parameters(mean, spread);
    exact_improvement(psi, w, a, b)
}

/// `(a, b) = (-<W>/2, Delta^2 / a)`.
pub fn default_parameters<T: Real>(mean: T, spread: T) -> (T, T) {
    let a = -mean / T::lit(2.0);
    (a, spread * spread / a)
}

/// True when `W' - W` is positive semidefinite within tolerance, which
/// keeps `W'` non-negative on separable states whenever `W` is.
pub fn separable_safety_check<T: Real>(w_prime: &Witness<T>, w: &Witness<T>) -> Result<bool> {
    if w_prime.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), found: w_prime.dim() });
    }
    let diff = w_prime.matrix() - w.matrix();
    Ok(hermitian_eig(&diff)?.min_value() >= -T::lit(T::TOL.psd))
}

fn check_dims<T: Real>(dim: usize, w: &Witness<T>) -> Result<()> {
    if dim != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), found: dim });
    }
    Ok(())
}

/// `(<W>, Delta)` after checking that `psi` is detected and not an eigenstate.
fn detected_moments<T: Real>(psi: &PureState<T>, w: &Witness<T>) -> Result<(T, T)> {
    check_dims(psi.dim(), w)?;
    let mean = psi.expectation(w.matrix())?;
    // states on the boundary <W> = 0 count as undetected
    if !(mean < -T::lit(T::TOL.degenerate_mean)) {
        return Err(Error::NotDetected(mean.as_f64()));
    }
    let spread = norm(&psi.deviation_vector(w.matrix())?);
    if spread <= T::lit(T::TOL.eigenstate_spread) {
        return Err(Error::AlreadyEigenstate(spread.as_f64()));
    }
    Ok((mean, spread))
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

fn finish<T: Real>(
    psi: &PureState<T>,
    w: &Witness<T>,
    added: DenseMatrix<T>,
    suffix: &str,
) -> Result<ImprovementResult<T>> {
    let improved = Witness::new(format!("{}+{suffix}", w.name()), w.matrix() + &added)?;
    let before = variance_model_significance(psi, w, None)?;
    let after = variance_model_significance(psi, &improved, None)?;
    let dev = psi.deviation_vector(improved.matrix())?;
    let diagnostics = ImprovementDiagnostics {
        expectation_before: -before.violation,
        expectation_after: -after.violation,
        spread_before: before.error,
        spread_after: norm(&dev),
        significance_before: before.significance,
        significance_after: after.significance,
        eigen_residual: norm(&dev),
        added_min_eigenvalue: hermitian_eig(&added)?.min_value(),
    };
    Ok(ImprovementResult { improved_witness: improved, added_operator: added, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ghz_state;

    fn demo() -> (PureState<f64>, Witness<f64>) {
        let psi = PureState::from_basis_terms(4, &[(0.8, "0000"), (0.6, "1111")]).unwrap();
        (psi, Witness::ghz_projector(4).unwrap())
    }

    #[test]
    fn demo_moments() {
        let (psi, w) = demo();
        let (mean, spread) = detected_moments(&psi, &w).unwrap();
        // <GHZ|psi>^2 = (0.8 + 0.6)^2 / 2 = 0.98
        assert!((mean + 0.48).abs() < 1e-12);
        assert!((spread - (0.98f64 * 0.02).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn q_vanishes_on_eigenstates() {
        let g = ghz_state::<f64>(4).unwrap().density();
        let q = q_operator(&g, &Witness::ghz_projector(4).unwrap()).unwrap();
        assert!(q.frobenius_norm() < 1e-12);
    }

    #[test]
    fn q_negative_for_demo() {
        let (psi, w) = demo();
        let q = q_operator(&psi.density(), &w).unwrap();
        assert!(q.hermitian_deviation() < 1e-12);
        assert!(hermitian_eig(&q).unwrap().min_value() < -1e-12);
    }

    #[test]
    fn orthogonal_direction_decomposes_w_psi() {
        let (psi, w) = demo();
        let perp = optimal_orthogonal_direction(&psi, &w).unwrap();
        let (mean, spread) = detected_moments(&psi, &w).unwrap();
        assert!(psi.inner(&perp).norm() < 1e-12);
        let wpsi = w.matrix().matvec(psi.amplitudes());
        let residual: f64 = wpsi
            .iter()
            .zip(psi.amplitudes())
            .zip(perp.amplitudes())
            .map(|((x, p), q)| (x - p * mean - q * spread).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(residual < 1e-10);
        let overlap: Complex<f64> = psi.amplitudes().iter().zip(w.matrix().matvec(perp.amplitudes())).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.re - spread).abs() < 1e-10 && overlap.im.abs() < 1e-12);
    }

    #[test]
    fn exact_demo() {
        let (psi, w) = demo();
        let (_, spread) = detected_moments(&psi, &w).unwrap();
        let r = exact_improvement(&psi, &w, 0.2, spread * spread / 0.2).unwrap();
        let d = r.diagnostics;
        assert!(d.eigen_residual < 1e-9);
        assert!(d.spread_after < 1e-10);
        assert!(d.added_min_eigenvalue >= -1e-10);
        assert!((d.expectation_after - (-0.48 + 0.2)).abs() < 1e-12);
        assert!(d.significance_after.is_infinite());
        assert!((&(r.improved_witness.matrix() - w.matrix()) - &r.added_operator).frobenius_norm() < 1e-12);
        assert!(separable_safety_check(&r.improved_witness, &w).unwrap());
        assert!(exact_improvement_default(&psi, &w).unwrap().diagnostics.significance_after.is_infinite());
    }

    #[test]
    fn constraint_violations_listed() {
        let (psi, w) = demo();
        match exact_improvement(&psi, &w, 0.5, -1.0).unwrap_err() {
            Error::Constraints(list) => {
                assert_eq!(list.len(), 3);
                assert!(matches!(list[0], Constraint::NonPositiveB { .. }));
                assert!(matches!(list[1], Constraint::ProductTooSmall { .. }));
                assert!(matches!(list[2], Constraint::AbandonsDetection { .. }));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn preconditions() {
        let w = Witness::<f64>::ghz_projector(4).unwrap();
        let g = ghz_state::<f64>(4).unwrap();
        assert!(matches!(perturbative_step(&g, &w, 1e-3), Err(Error::AlreadyEigenstate(_))));
        let zero = PureState::<f64>::basis(4, 0).unwrap();
        assert!(matches!(exact_improvement_default(&zero, &w), Err(Error::NotDetected(_))));
        let (psi, w) = demo();
        assert!(matches!(perturbative_step(&psi, &w, 0.0), Err(Error::NonPositiveGamma(_))));
    }

    #[test]
    fn perturbative_step_raises_significance() {
        let (psi, w) = demo();
        for gamma in [1e-4, 1e-3] {
            let d = perturbative_step(&psi, &w, gamma).unwrap().diagnostics;
            assert!(d.significance_after.value() > d.significance_before.value());
        }
    }

    #[test]
    fn safety_check_examples() {
        let w = Witness::<f64>::ghz_projector(4).unwrap();
        assert!(separable_safety_check(&w, &w).unwrap());
        let shifted = Witness::new("s", w.matrix() - &DenseMatrix::identity(16).scale(0.1)).unwrap();
        assert!(!separable_safety_check(&shifted, &w).unwrap());
    }
}
