mod common;

use common::{density, hermitian, pure_state};
use entsig::inequality::{ardehali, mermin, violation};
use entsig::noise::{apply_local, bit_flip_channel, white_noise};
use entsig::quantum::{hermitian_eig, DenseMatrix, ProductObservable};
use entsig::significance::{evaluate, predicted_counts, setting_estimate, ShotBudget, Significance};
use proptest::prelude::*;

fn observable(label: &str) -> DenseMatrix<f64> {
    ProductObservable::parse(1.0, label).unwrap().matrix()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn expectation_is_linear(rho in density(3), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let x = observable("XZY");
        let y = observable("ZIA");
        let combo = &x.scale(a) + &y.scale(b);
        let lhs = rho.expectation(&combo).unwrap();
        let rhs = a * rho.expectation(&x).unwrap() + b * rho.expectation(&y).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn pure_variance_matches_moments(psi in pure_state(4)) {
        let o = &observable("XXYB") + &observable("ZZZI").scale(0.5);
        let mean = psi.expectation(&o).unwrap();
        let second = psi.expectation(&(&o * &o)).unwrap();
        let var = psi.variance(&o).unwrap();
        prop_assert!((var - (second - mean * mean).max(0.0)).abs() < 1e-10);
        prop_assert!((var - psi.density().variance(&o).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn bit_flips_on_different_qubits_commute(rho in density(3), p in 0.0..1.0f64, q in 0.0..1.0f64) {
        let cp = bit_flip_channel(p).unwrap();
        let cq = bit_flip_channel(q).unwrap();
        let one = apply_local(&apply_local(&rho, &cp, 0).unwrap(), &cq, 2).unwrap();
        let two = apply_local(&apply_local(&rho, &cq, 2).unwrap(), &cp, 0).unwrap();
        prop_assert!(one.matrix().max_abs_diff(two.matrix()) < 1e-12);
        prop_assert!((one.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn white_noise_composes(rho in density(2), q1 in 0.0..1.0f64, q2 in 0.0..1.0f64) {
        let twice = white_noise(&white_noise(&rho, q1).unwrap(), q2).unwrap();
        let once = white_noise(&rho, 1.0 - (1.0 - q1) * (1.0 - q2)).unwrap();
        prop_assert!(twice.matrix().max_abs_diff(once.matrix()) < 1e-12);
    }

    #[test]
    fn inequality_operator_matches_outcome_form(rho in density(4)) {
        for ineq in [mermin::<f64>(4).unwrap(), ardehali::<f64>(4).unwrap()] {
            let direct = rho.expectation(&ineq.operator()).unwrap();
            prop_assert!((direct - ineq.expectation(&rho).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn predicted_counts_reproduce_violation(rho in density(4), total in 100.0..1e5f64) {
        for ineq in [mermin::<f64>(4).unwrap(), ardehali::<f64>(4).unwrap()] {
            let budget = ShotBudget::equal_split(total, ineq.settings().len()).unwrap();
            let report = evaluate(&predicted_counts(&rho, &ineq, &budget).unwrap(), &ineq).unwrap();
            prop_assert!((report.violation - violation(&rho, &ineq).unwrap()).abs() < 1e-9);
            if let Significance::Finite(s) = report.significance {
                prop_assert!((s * report.error - report.violation).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn mean_is_scale_invariant(
        counts in prop::collection::vec(0.0..500.0f64, 8),
        coeffs in prop::collection::vec(-3.0..3.0f64, 8),
        c in 0.01..100.0f64,
    ) {
        prop_assume!(counts.iter().sum::<f64>() > 1.0);
        let (m1, e1) = setting_estimate(&counts, &coeffs).unwrap();
        let scaled: Vec<f64> = counts.iter().map(|n| n * c).collect();
        let (m2, e2) = setting_estimate(&scaled, &coeffs).unwrap();
        prop_assert!((m1 - m2).abs() < 1e-10);
        prop_assert!((e1 / c.sqrt() - e2).abs() < 1e-10);
    }

    #[test]
    fn error_vanishes_when_outcome_values_agree(
        counts in prop::collection::vec(0.0..500.0f64, 4),
        value in -3.0..3.0f64,
        other in -3.0..3.0f64,
    ) {
        prop_assume!(counts[0] + counts[3] > 1.0);
        // outcomes 1 and 2 never fire, so their coefficients are irrelevant
        let support = [counts[0], 0.0, 0.0, counts[3]];
        let (mean, err) = setting_estimate(&support, &[value, other, other, value]).unwrap();
        prop_assert!((mean - value).abs() < 1e-12);
        prop_assert!(err < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eigendecomposition_reconstructs(h in (1usize..=6).prop_flat_map(|k| hermitian(1 << k))) {
        let eig = hermitian_eig(&h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-10 * scale);
        for w in eig.values.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }
}

#[test]
fn single_precision_smoke() {
    let g = entsig::quantum::ghz_state::<f32>(4).unwrap().density();
    let m = mermin::<f32>(4).unwrap();
    assert!((m.expectation(&g).unwrap() - 8.0).abs() < 1e-4);
    let a = ardehali::<f32>(4).unwrap();
    assert!((a.lhv_bound() - 2.0 * 2f32.sqrt()).abs() < 1e-5);
    let rho = entsig::noise::bit_flip_all(&g, 0.05f32).unwrap();
    let budget = ShotBudget::equal_split(8000.0f32, 8).unwrap();
    let r32 = evaluate(&predicted_counts(&rho, &m, &budget).unwrap(), &m).unwrap();
    let g64 = entsig::quantum::ghz_state::<f64>(4).unwrap().density();
    let rho64 = entsig::noise::bit_flip_all(&g64, 0.05).unwrap();
    let m64 = mermin::<f64>(4).unwrap();
    let r64 = evaluate(&predicted_counts(&rho64, &m64, &ShotBudget::equal_split(8000.0, 8).unwrap()).unwrap(), &m64).unwrap();
    assert!((r32.violation as f64 - r64.violation).abs() < 1e-4);
    assert!((r32.error as f64 - r64.error).abs() < 1e-5);
}
