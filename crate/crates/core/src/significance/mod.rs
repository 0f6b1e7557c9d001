//! Violation, statistical error and significance `S = V / E`.
//!
//! Count-based errors follow Gaussian propagation of independent Poisson
//! counts: for one setting with outcome counts `n_o`, total `n_tot` and mean
//! `m = sum_o lambda_o n_o / n_tot`,
//!
//! ```text
//! E^2 = sum_o (lambda_o / n_tot - m / n_tot)^2 n_o
//! ```
//!
//! Settings are measured on disjoint ensembles, so their errors add in
//! quadrature.

mod counts;
mod montecarlo;
mod sweep;

use std::borrow::Cow;
use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::{BellInequality, Witness};
use crate::quantum::{DenseMatrix, QuantumState};
use crate::scalar::Real;

pub use counts::{
    predicted_counts, sample_counts, sample_counts_with, CountFile, CountMode, CountTable, SettingCounts,
    ShotBudget,
};
pub use montecarlo::{monte_carlo_study, MonteCarloSummary, MIN_TRIALS};
pub use sweep::{
    crossing_point, default_grid, significance_sweep, BudgetPolicy, Crossing, InitialState, NoiseFamily,
    NoisyExperiment, SweepEntry, SweepRow, DEFAULT_GRID_POINTS, DEFAULT_TOTAL_COPIES,
};

/// `V / E` with the zero-error cases kept apart from finite values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Significance<T> {
    Finite(T),
    /// `E = 0` and `V > 0`.
    Infinite,
    /// `E = 0` and `V <= 0`; reported as zero.
    Degenerate,
}

impl<T: Real> Significance<T> {
    pub fn from_parts(violation: T, error: T) -> Self {
        if error > T::zero() {
            Significance::Finite(violation / error)
        } else if violation > T::zero() {
            Significance::Infinite
        } else {
            Significance::Degenerate
        }
    }

    /// Numeric value: `+inf` for [`Significance::Infinite`], 0 when degenerate.
    pub fn value(&self) -> T {
        match *self {
            Significance::Finite(s) => s,
            Significance::Infinite => T::infinity(),
            Significance::Degenerate => T::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Significance::Infinite)
    }

    /// Orders infinite above every finite value.
    pub fn compare(&self, other: &Self) -> Ordering {
        self.value().partial_cmp(&other.value()).unwrap_or(Ordering::Equal)
    }
}

/// Mean and propagated error of one setting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingContribution<T> {
    pub label: String,
    pub mean: T,
    pub error: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceReport<T> {
    pub name: String,
    pub violation: T,
    pub error: T,
    pub significance: Significance<T>,
    pub per_setting: Vec<SettingContribution<T>>,
    pub lhv_bound: Option<T>,
    pub total_counts: Option<T>,
}

impl<T: Real> SignificanceReport<T> {
    fn new(name: &str, violation: T, error: T) -> Self {
        SignificanceReport {
            name: name.to_string(),
            violation,
            error,
            significance: Significance::from_parts(violation, error),
            per_setting: Vec::new(),
            lhv_bound: None,
            total_counts: None,
        }
    }
}

/// Mean and Poisson-propagated error of one setting's counts.
pub fn setting_estimate<T: Real>(counts: &[T], coeffs: &[T]) -> Result<(T, T)> {
    if counts.len() != coeffs.len() {
        return Err(Error::CountLength { setting: String::new(), expected: coeffs.len(), found: counts.len() });
    }
    if counts.iter().any(|&n| !(n >= T::zero()) || !n.is_finite()) {
        return Err(Error::BadCount(String::new()));
    }
    let n_tot: T = counts.iter().copied().sum();
    if !(n_tot > T::zero()) {
        return Err(Error::NoData(String::new()));
    }
    let mean = counts.iter().zip(coeffs).map(|(&n, &l)| l * n).sum::<T>() / n_tot;
    let var = counts
        .iter()
        .zip(coeffs)
        .map(|(&n, &l)| {
            let d = l / n_tot - mean / n_tot;
            d * d * n
        })
        .sum::<T>();
    Ok((mean, var.sqrt()))
}

fn label_error(e: Error, label: &str) -> Error {
    match e {
        Error::CountLength { expected, found, .. } => Error::CountLength { setting: label.to_string(), expected, found },
        Error::BadCount(_) => Error::BadCount(label.to_string()),
        Error::NoData(_) => Error::NoData(label.to_string()),
        other => other,
    }
}

/// `V = sum_s mean_s - C_lhv`, `E = sqrt(sum_s E_s^2)`.
pub fn evaluate<T: Real>(counts: &CountTable<T>, ineq: &BellInequality<T>) -> Result<SignificanceReport<T>> {
    for entry in counts.settings() {
        if ineq.setting_index(&entry.label).is_none() {
            return Err(Error::UnknownSetting(entry.label.clone()));
        }
    }
    let mut total = T::zero();
    let mut err2 = T::zero();
    let mut n_total = T::zero();
    let mut per_setting = Vec::with_capacity(ineq.settings().len());
    for (setting, coeffs) in ineq.settings().iter().zip(ineq.outcome_coeffs()) {
        let label = setting.label();
        let entry = counts.get(label).ok_or_else(|| Error::MissingSetting(label.to_string()))?;
        let (mean, error) = setting_estimate(&entry.counts, coeffs).map_err(|e| label_error(e, label))?;
        total = total + mean;
        err2 = err2 + error * error;
        n_total = n_total + entry.counts.iter().copied().sum::<T>();
        per_setting.push(SettingContribution { label: label.to_string(), mean, error });
    }
    let mut report = SignificanceReport::new(ineq.name(), total - ineq.lhv_bound(), err2.sqrt());
    report.per_setting = per_setting;
    report.lhv_bound = Some(ineq.lhv_bound());
    report.total_counts = Some(n_total);
    Ok(report)
}

/// Anything whose significance can be judged by its spread on a state.
pub trait VarianceTarget<T: Real> {
    fn name(&self) -> &str;
    fn test_operator(&self) -> Cow<'_, DenseMatrix<T>>;
    /// Violation for a given expectation value of the operator.
    fn violation_of(&self, mean: T) -> T;
}

impl<T: Real> VarianceTarget<T> for Witness<T> {
    fn name(&self) -> &str {
        Witness::name(self)
    }
    fn test_operator(&self) -> Cow<'_, DenseMatrix<T>> {
        Cow::Borrowed(self.matrix())
    }
    fn violation_of(&self, mean: T) -> T {
        -mean
    }
}

impl<T: Real> VarianceTarget<T> for BellInequality<T> {
    fn name(&self) -> &str {
        BellInequality::name(self)
    }
    fn test_operator(&self) -> Cow<'_, DenseMatrix<T>> {
        Cow::Owned(self.operator())
    }
    fn violation_of(&self, mean: T) -> T {
        mean - self.lhv_bound()
    }
}

/// Significance with the single-copy spread `Delta` as the error, or
/// `Delta / sqrt(copies)` when `copies` is given. A spread at or below the
/// eigenstate tolerance counts as zero error.
pub fn variance_model_significance<T, S, V>(
    state: &S,
    target: &V,
    copies: Option<T>,
) -> Result<SignificanceReport<T>>
where
    T: Real,
    S: QuantumState<T>,
    V: VarianceTarget<T> + ?Sized,
{
    let op = target.test_operator();
    let mean = state.expectation(&op)?;
    let mut spread = state.spread(&op)?;
    if spread <= T::lit(T::TOL.eigenstate_spread) {
        spread = T::zero();
    }
    if let Some(n) = copies {
        if !(n > T::zero()) {
            return Err(Error::Budget(format!("copies must be positive, got {n}")));
        }
        spread = spread / n.sqrt();
    }
    Ok(SignificanceReport::new(target.name(), target.violation_of(mean), spread))
}
