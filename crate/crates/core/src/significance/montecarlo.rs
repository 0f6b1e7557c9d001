use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate, predicted_counts, sample_counts_with, ShotBudget};
use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::quantum::DensityMatrix;
use crate::scalar::Real;

pub const MIN_TRIALS: usize = 100;

/// Sampled spread of `V` against the propagated error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary<T> {
    pub trials: usize,
    /// Trials dropped because a setting recorded no counts.
    pub skipped: usize,
    pub predicted_violation: T,
    pub predicted_error: T,
    pub mean_violation: T,
    pub std_violation: T,
    pub mean_error: T,
    /// Fraction of trials with `|V_i - V_predicted| <= E_i`.
    pub coverage: T,
    /// `std(V) / mean(E)`; absent when the mean error is zero.
    pub ratio: Option<T>,
    /// Smallest non-zero expected outcome count.
    pub min_expected_count: T,
}

/// Repeats Poisson sampling and evaluation `trials` times. Trial `i` draws
/// from a ChaCha8 stream `i` under `seed`, so results do not depend on
/// scheduling.
pub fn monte_carlo_study<T: Real>(
    rho: &DensityMatrix<T>,
    ineq: &BellInequality<T>,
    budget: &ShotBudget<T>,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloSummary<T>> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials { min: MIN_TRIALS, got: trials });
    }
    let predicted = predicted_counts(rho, ineq, budget)?;
    let reference = evaluate(&predicted, ineq)?;
    let min_expected_count = predicted
        .settings()
        .iter()
        .flat_map(|s| s.counts.iter().copied())
        .filter(|&c| c > T::zero())
        .fold(T::infinity(), T::min);

    let outcomes: Vec<Option<(T, T)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let counts = sample_counts_with(&predicted, &mut rng);
            match evaluate(&counts, ineq) {
                Ok(r) => Ok(Some((r.violation, r.error))),
                Err(Error::NoData(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let kept: Vec<(T, T)> = outcomes.iter().flatten().copied().collect();
    if kept.len() < 2 {
        return Err(Error::NoData(ineq.name().to_string()));
    }
    let count = T::from_usize(kept.len()).expect("trial count");
    let mean_violation = kept.iter().map(|r| r.0).sum::<T>() / count;
    let mean_error = kept.iter().map(|r| r.1).sum::<T>() / count;
    let var = kept.iter().map(|r| (r.0 - mean_violation).powi(2)).sum::<T>() / (count - T::one());
    let std_violation = var.sqrt();
    let eps = T::lit(T::TOL.degenerate_mean);
    let covered = kept.iter().filter(|(v, e)| (*v - reference.violation).abs() <= *e + eps).count();
    Ok(MonteCarloSummary {
        trials,
        skipped: trials - kept.len(),
        predicted_violation: reference.violation,
        predicted_error: reference.error,
        mean_violation,
        std_violation,
        mean_error,
        coverage: T::from_usize(covered).expect("trial count") / count,
        ratio: (mean_error > T::zero()).then(|| std_violation / mean_error),
        min_expected_count,
    })
}
