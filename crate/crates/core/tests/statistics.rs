use std::cmp::Ordering;

use entsig::inequality::{ardehali, mermin, outcome_probabilities};
use entsig::noise::{bit_flip_all, ExperimentalAnsatzParams};
use entsig::quantum::{ghz_state, DensityMatrix};
use entsig::significance::{
    crossing_point, evaluate, monte_carlo_study, predicted_counts, sample_counts, BudgetPolicy, InitialState,
    NoiseFamily, NoisyExperiment, ShotBudget,
};

#[test]
fn sampled_means_match_predictions() {
    let rho = bit_flip_all(&ghz_state::<f64>(4).unwrap().density(), 0.07).unwrap();
    let m = mermin::<f64>(4).unwrap();
    let budget = ShotBudget::uniform(1000.0, 8).unwrap();
    let predicted = predicted_counts(&rho, &m, &budget).unwrap();
    let trials = 10_000;
    let mut sums = vec![vec![0.0; 16]; 8];
    for seed in 0..trials {
        let t = sample_counts(&rho, &m, &budget, seed).unwrap();
        for (acc, s) in sums.iter_mut().zip(t.settings()) {
            for (a, c) in acc.iter_mut().zip(&s.counts) {
                *a += c;
            }
        }
    }
    for (acc, s) in sums.iter().zip(predicted.settings()) {
        for (sum, &mean) in acc.iter().zip(&s.counts) {
            let empirical = sum / trials as f64;
            // Poisson: the mean of `trials` draws has standard deviation sqrt(mean / trials)
            let sigma = (mean / trials as f64).sqrt();
            assert!((empirical - mean).abs() <= 3.0 * sigma + 1e-12, "{}: {empirical} vs {mean}", s.label);
        }
    }
}

#[test]
fn predicted_count_examples() {
    let mixed = DensityMatrix::<f64>::maximally_mixed(4).unwrap();
    let m = mermin::<f64>(4).unwrap();
    let t = predicted_counts(&mixed, &m, &ShotBudget::uniform(160.0, 8).unwrap()).unwrap();
    assert!(t.settings().iter().flat_map(|s| &s.counts).all(|&c| (c - 10.0).abs() < 1e-12));

    let g = ghz_state::<f64>(4).unwrap().density();
    let z = entsig::inequality::MeasurementSetting::parse("ZZZZ").unwrap();
    let p = outcome_probabilities(&g, &z).unwrap();
    assert!((p[0] * 1000.0 - 500.0).abs() < 1e-9 && (p[15] * 1000.0 - 500.0).abs() < 1e-9);
}

#[test]
fn evaluate_examples() {
    let g = ghz_state::<f64>(4).unwrap().density();
    let a = ardehali::<f64>(4).unwrap();
    let r = evaluate(&predicted_counts(&g, &a, &ShotBudget::uniform(500.0, 16).unwrap()).unwrap(), &a).unwrap();
    assert!((r.violation - (8.0 - 2.0 * 2f64.sqrt())).abs() < 1e-9);
    assert!(r.error > 0.0);

    let mixed = DensityMatrix::<f64>::maximally_mixed(4).unwrap();
    for ineq in [mermin::<f64>(4).unwrap(), a] {
        let budget = ShotBudget::equal_split(8000.0, ineq.settings().len()).unwrap();
        assert!(evaluate(&predicted_counts(&mixed, &ineq, &budget).unwrap(), &ineq).unwrap().violation < 0.0);
    }
}

#[test]
fn missing_setting_is_reported() {
    let g = ghz_state::<f64>(4).unwrap().density();
    let m = mermin::<f64>(4).unwrap();
    let t = predicted_counts(&g, &m, &ShotBudget::uniform(10.0, 8).unwrap()).unwrap();
    let partial = entsig::Counts::new("mermin4", t.mode(), t.settings()[1..].to_vec()).unwrap();
    assert_eq!(evaluate(&partial, &m).unwrap_err(), entsig::Error::MissingSetting("XXXX".into()));
}

#[test]
fn order_flips_exactly_once_at_the_crossing() {
    for (noise, n) in [(NoiseFamily::BitFlip, 4), (NoiseFamily::White, 4), (NoiseFamily::BitFlip, 6), (NoiseFamily::White, 6)] {
        let exp = NoisyExperiment::mermin_vs_ardehali(noise, n, &InitialState::Ghz, &BudgetPolicy::default()).unwrap();
        let c = crossing_point::<f64>(noise, n, &BudgetPolicy::default(), &InitialState::Ghz).unwrap();
        let end = (2.0 * c.parameter).min(noise.search_limit());
        let grid: Vec<f64> = (0..60).map(|i| end * i as f64 / 59.0).collect();
        for row in exp.sweep(&grid).unwrap() {
            if (row.parameter - c.parameter).abs() < 1e-4 {
                continue;
            }
            let mermin_ahead = row.entries[0].significance.compare(&row.entries[1].significance) != Ordering::Less;
            assert_eq!(mermin_ahead, row.fidelity >= c.fidelity, "{noise:?} n={n} p={}", row.parameter);
        }
    }
}

#[test]
fn monte_carlo_error_scales_with_budget() {
    let rho = bit_flip_all(&ghz_state::<f64>(4).unwrap().density(), 0.05).unwrap();
    let a = ardehali::<f64>(4).unwrap();
    let small = monte_carlo_study(&rho, &a, &ShotBudget::uniform(500.0, 16).unwrap(), 500, 4).unwrap();
    let large = monte_carlo_study(&rho, &a, &ShotBudget::uniform(1000.0, 16).unwrap(), 500, 4).unwrap();
    let ratio = large.mean_error / small.mean_error;
    assert!((ratio - 0.5f64.sqrt()).abs() < 0.05 * 0.5f64.sqrt(), "{ratio}");
}

#[test]
fn monte_carlo_coverage_near_one_sigma() {
    let rho = bit_flip_all(&ghz_state::<f64>(4).unwrap().density(), 0.05).unwrap();
    let m = mermin::<f64>(4).unwrap();
    let s = monte_carlo_study(&rho, &m, &ShotBudget::uniform(1000.0, 8).unwrap(), 2000, 21).unwrap();
    assert!(s.min_expected_count >= 10.0);
    assert!((s.std_violation - s.mean_error).abs() / s.std_violation < 0.1);
    // a Gaussian puts 68% of the mass within one standard deviation
    assert!((s.coverage - 0.683).abs() < 0.05, "{}", s.coverage);
}

#[test]
fn ansatz_model_starts_with_mermin_ahead() {
    let exp = NoisyExperiment::<f64>::mermin_vs_ardehali(
        NoiseFamily::BitFlip,
        4,
        &InitialState::Ansatz(ExperimentalAnsatzParams::EXPERIMENT),
        &BudgetPolicy::default(),
    )
    .unwrap();
    let row = exp.row(0.0).unwrap();
    assert!((row.fidelity - 0.844).abs() < 0.005);
    assert_eq!(row.entries[0].significance.compare(&row.entries[1].significance), Ordering::Greater);
}
