//! JSON layout for inequalities:
//!
//! ```json
//! {"name": "mermin4", "n_qubits": 4, "lhv_bound": 4.0,
//!  "settings": [{"label": "XXXX", "coeffs": [1.0, -1.0, ...]}, ...]}
//! ```
//!
//! Setting labels use one character per qubit from `X Y Z A B`. When
//! `lhv_bound` is omitted it is computed by enumeration.

use serde::{Deserialize, Serialize};

use super::{BellInequality, MeasurementSetting};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingEntry {
    pub label: String,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityFile {
    pub name: String,
    pub n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhv_bound: Option<f64>,
    pub settings: Vec<SettingEntry>,
}

impl InequalityFile {
    pub fn from_inequality<T: Real>(ineq: &BellInequality<T>) -> Self {
        InequalityFile {
            name: ineq.name().to_string(),
            n_qubits: ineq.n_qubits(),
            lhv_bound: Some(ineq.lhv_bound().as_f64()),
            settings: ineq
                .settings()
                .iter()
                .zip(ineq.outcome_coeffs())
                .map(|(s, c)| SettingEntry {
                    label: s.label().to_string(),
                    coeffs: c.iter().map(|x| x.as_f64()).collect(),
                })
                .collect(),
        }
    }

    pub fn to_inequality<T: Real>(&self) -> Result<BellInequality<T>> {
        let mut settings = Vec::with_capacity(self.settings.len());
        let mut coeffs = Vec::with_capacity(self.settings.len());
        for entry in &self.settings {
            let s = MeasurementSetting::<T>::parse(&entry.label)?;
            if s.n_qubits() != self.n_qubits {
                return Err(Error::Schema(format!(
                    "setting {} has {} qubits, expected {}",
                    entry.label,
                    s.n_qubits(),
                    self.n_qubits
                )));
            }
            settings.push(s);
            coeffs.push(entry.coeffs.iter().map(|&x| T::lit(x)).collect());
        }
        match self.lhv_bound {
            Some(b) => BellInequality::new(self.name.clone(), settings, coeffs, T::lit(b)),
            None => BellInequality::with_bruteforce_bound(self.name.clone(), settings, coeffs),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::ardehali;

    #[test]
    fn round_trip_preserves_inequality() {
        let a = ardehali::<f64>(4).unwrap();
        let file = InequalityFile::from_inequality(&a);
        let back = InequalityFile::from_json(&file.to_json()).unwrap().to_inequality::<f64>().unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn missing_bound_is_enumerated() {
        let mut file = InequalityFile::from_inequality(&crate::inequality::mermin::<f64>(4).unwrap());
        file.lhv_bound = None;
        let ineq = file.to_inequality::<f64>().unwrap();
        assert!((ineq.lhv_bound() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn bad_label_and_json_rejected() {
        let file = InequalityFile {
            name: "x".into(),
            n_qubits: 2,
            lhv_bound: Some(0.0),
            settings: vec![SettingEntry { label: "XQ".into(), coeffs: vec![0.0; 4] }],
        };
        assert!(matches!(file.to_inequality::<f64>(), Err(Error::UnknownLabel(_))));
        assert!(matches!(InequalityFile::from_json("{"), Err(Error::Schema(_))));
    }
}
