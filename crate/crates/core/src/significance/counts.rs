use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::{outcome_probabilities, BellInequality};
use crate::quantum::DensityMatrix;
use crate::scalar::Real;

/// Number of state copies measured in each setting.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotBudget<T> {
    per_setting: Vec<T>,
}

impl<T: Real> ShotBudget<T> {
    /// Splits `total` copies equally over `n_settings`.
    pub fn equal_split(total: T, n_settings: usize) -> Result<Self> {
        if n_settings == 0 {
            return Err(Error::Budget("no settings to distribute copies over".into()));
        }
        let each = total / T::from_usize(n_settings).expect("setting count");
        Self::uniform(each, n_settings)
    }

    /// The same number of copies in every setting.
    pub fn uniform(each: T, n_settings: usize) -> Result<Self> {
        Self::new(vec![each; n_settings])
    }

    pub fn new(per_setting: Vec<T>) -> Result<Self> {
        if per_setting.is_empty() {
            return Err(Error::Budget("empty allocation".into()));
        }
        if let Some(bad) = per_setting.iter().find(|&&n| !(n > T::zero()) || !n.is_finite()) {
            return Err(Error::Budget(format!("copies per setting must be positive and finite, got {bad}")));
        }
        Ok(ShotBudget { per_setting })
    }

    pub fn per_setting(&self) -> &[T] {
        &self.per_setting
    }

    pub fn total(&self) -> T {
        self.per_setting.iter().copied().sum()
    }

    fn check(&self, ineq: &BellInequality<T>) -> Result<()> {
        if self.per_setting.len() != ineq.settings().len() {
            return Err(Error::Budget(format!(
                "allocation covers {} settings, inequality has {}",
                self.per_setting.len(),
                ineq.settings().len()
            )));
        }
        Ok(())
    }
}

/// Whether counts are expected values or Poisson samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Predicted,
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SettingCounts<T> {
    pub label: String,
    pub counts: Vec<T>,
}

/// Outcome counts for a set of labelled settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable<T> {
    inequality: String,
    mode: CountMode,
    settings: Vec<SettingCounts<T>>,
}

impl<T: Real> CountTable<T> {
    pub fn new(inequality: impl Into<String>, mode: CountMode, settings: Vec<SettingCounts<T>>) -> Result<Self> {
        for (i, s) in settings.iter().enumerate() {
            if settings[..i].iter().any(|o| o.label == s.label) {
                return Err(Error::Schema(format!("duplicate setting {}", s.label)));
            }
            if s.counts.iter().any(|&n| !(n >= T::zero()) || !n.is_finite()) {
                return Err(Error::BadCount(s.label.clone()));
            }
        }
        Ok(CountTable { inequality: inequality.into(), mode, settings })
    }

    pub fn inequality(&self) -> &str {
        &self.inequality
    }

    pub fn mode(&self) -> CountMode {
        self.mode
    }

    pub fn settings(&self) -> &[SettingCounts<T>] {
        &self.settings
    }

    pub fn get(&self, label: &str) -> Option<&SettingCounts<T>> {
        self.settings.iter().find(|s| s.label == label)
    }

    pub fn total(&self) -> T {
        self.settings.iter().flat_map(|s| s.counts.iter().copied()).sum()
    }

    pub fn to_file(&self) -> CountFile {
        CountFile {
            inequality: self.inequality.clone(),
            settings: self
                .settings
                .iter()
                .map(|s| CountFileEntry {
                    label: s.label.clone(),
                    counts: s
                        .counts
                        .iter()
                        .map(|&n| match self.mode {
                            CountMode::Sampled => CountValue::Integer(n.as_f64().round() as u64),
                            CountMode::Predicted => CountValue::Real(n.as_f64()),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Reads a count file; the mode is [`CountMode::Sampled`] when every
    /// count is a JSON integer.
    pub fn from_file(file: &CountFile) -> Result<Self> {
        let all_integer = file
            .settings
            .iter()
            .flat_map(|s| &s.counts)
            .all(|c| matches!(c, CountValue::Integer(_)));
        let mode = if all_integer { CountMode::Sampled } else { CountMode::Predicted };
        let settings = file
            .settings
            .iter()
            .map(|s| SettingCounts {
                label: s.label.clone(),
                counts: s.counts.iter().map(|c| T::lit(c.as_f64())).collect(),
            })
            .collect();
        Self::new(file.inequality.clone(), mode, settings)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CountFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("count file serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CountValue {
    Integer(u64),
    Real(f64),
}

impl CountValue {
    pub fn as_f64(self) -> f64 {
        match self {
            CountValue::Integer(n) => n as f64,
            CountValue::Real(x) => x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountFileEntry {
    pub label: String,
    pub counts: Vec<CountValue>,
}

/// On-disk form: `{"inequality": ..., "settings": [{"label": ..., "counts": [...]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountFile {
    pub inequality: String,
    pub settings: Vec<CountFileEntry>,
}

/// Expected counts `N_s p_s(o)`.
pub fn predicted_counts<T: Real>(
    rho: &DensityMatrix<T>,
    ineq: &BellInequality<T>,
    budget: &ShotBudget<T>,
) -> Result<CountTable<T>> {
    budget.check(ineq)?;
    ineq.check_state(rho)?;
    let settings = ineq
        .settings()
        .iter()
        .zip(budget.per_setting())
        .map(|(s, &n)| {
            let probs = outcome_probabilities(rho, s)?;
            Ok(SettingCounts { label: s.label().to_string(), counts: probs.into_iter().map(|p| p * n).collect() })
        })
        .collect::<Result<Vec<_>>>()?;
    CountTable::new(ineq.name(), CountMode::Predicted, settings)
}

/// Independent Poisson draws around the predicted counts, seeded.
pub fn sample_counts<T: Real>(
    rho: &DensityMatrix<T>,
    ineq: &BellInequality<T>,
    budget: &ShotBudget<T>,
    seed: u64,
) -> Result<CountTable<T>> {
    let predicted = predicted_counts(rho, ineq, budget)?;
    Ok(sample_counts_with(&predicted, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Poisson draws around `predicted` from the given generator.
pub fn sample_counts_with<T: Real, R: rand::Rng + ?Sized>(predicted: &CountTable<T>, rng: &mut R) -> CountTable<T> {
    let settings = predicted
        .settings
        .iter()
        .map(|s| SettingCounts {
            label: s.label.clone(),
            counts: s
                .counts
                .iter()
                .map(|&mean| {
                    let mean = mean.as_f64();
                    if mean > 0.0 {
                        T::lit(Poisson::new(mean).expect("positive finite mean").sample(rng))
                    } else {
                        T::zero()
                    }
                })
                .collect(),
        })
        .collect();
    CountTable { inequality: predicted.inequality.clone(), mode: CountMode::Sampled, settings }
}
