//! Text output: CSV tables and JSON documents with numbers rounded to nine
//! significant digits.

use serde::Serialize;
use serde_json::Value;

use crate::scalar::Real;
use crate::significance::{Significance, SignificanceReport, SweepRow};

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Shortest text for `x` after rounding: plain notation for moderate
/// magnitudes, exponent notation otherwise.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    let mag = r.abs();
    if (1e-4..1e15).contains(&mag) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// `inf` for an infinite significance, `0` for a degenerate one.
pub fn format_significance<T: Real>(s: &Significance<T>) -> String {
    match s {
        Significance::Finite(v) => format_number(v.as_f64()),
        Significance::Infinite => "inf".into(),
        Significance::Degenerate => "0".into(),
    }
}

fn tag(name: &str) -> String {
    name.chars().next().map(|c| c.to_ascii_uppercase().to_string()).unwrap_or_default()
}

/// `p,F,V_M,E_M,S_M,V_A,E_A,S_A` for a Mermin/Ardehali sweep; the suffixes
/// are the upper-cased initials of the inequality names.
pub fn sweep_csv<T: Real>(rows: &[SweepRow<T>]) -> String {
    let mut out = String::from("p,F");
    if let Some(first) = rows.first() {
        for e in &first.entries {
            let t = tag(&e.name);
            out.push_str(&format!(",V_{t},E_{t},S_{t}"));
        }
    }
    out.push('\n');
    for row in rows {
        let mut fields = vec![format_number(row.parameter.as_f64()), format_number(row.fidelity.as_f64())];
        for e in &row.entries {
            fields.push(format_number(e.violation.as_f64()));
            fields.push(format_number(e.error.as_f64()));
            fields.push(format_significance(&e.significance));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Per-setting rows followed by a `violation` row carrying `V`, `E` and `S`.
pub fn report_csv<T: Real>(report: &SignificanceReport<T>) -> String {
    let mut out = String::from("label,value,error,significance\n");
    for s in &report.per_setting {
        out.push_str(&format!("{},{},{},\n", s.label, format_number(s.mean.as_f64()), format_number(s.error.as_f64())));
    }
    out.push_str(&format!(
        "violation,{},{},{}\n",
        format_number(report.violation.as_f64()),
        format_number(report.error.as_f64()),
        format_significance(&report.significance)
    ));
    out
}

/// Pretty JSON with every floating-point number rounded.
pub fn to_json<S: Serialize>(value: &S) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    let mut text = serde_json::to_string_pretty(&round_value(v)).expect("json value serializes");
    text.push('\n');
    text
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}
