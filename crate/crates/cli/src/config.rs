use std::path::PathBuf;

use entsig::noise::ExperimentalAnsatzParams;
use entsig::significance::{BudgetPolicy, InitialState, NoiseFamily, MIN_TRIALS};
use thiserror::Error;

use crate::args::{ExperimentArgs, Format, NoiseArg, OutputArgs, StateArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Config { field: &'static str, message: String },
    #[error("{0}")]
    Data(String),
    #[error("no crossing: {0}")]
    NoCrossing(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] entsig::Error),
}

impl CliError {
    pub fn config(field: &'static str, message: impl Into<String>) -> Self {
        CliError::Config { field, message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        use entsig::Error as E;
        match self {
            CliError::Config { .. } | CliError::Output { .. } => 2,
            CliError::Data(_) => 3,
            CliError::NoCrossing(_) => 4,
            CliError::Core(e) => match e {
                E::NoCrossing => 4,
                E::Schema(_)
                | E::UnknownSetting(_)
                | E::MissingSetting(_)
                | E::NoData(_)
                | E::CountLength { .. }
                | E::BadCount(_)
                | E::UnknownLabel(_) => 3,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Validated settings shared by the state-and-noise commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub noise: NoiseFamily,
    pub n_qubits: usize,
    pub initial: InitialState,
    pub budget: BudgetPolicy<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(

        exp: &ExperimentArgs,
        output: Option<&OutputArgs>,
        default_format: Format,
    ) -> CliResult<Self> {
        let n_qubits = check_qubits(exp.qubits)?;
        let noise = match exp.noise {
            NoiseArg::Bitflip => NoiseFamily::BitFlip,
            NoiseArg::White => NoiseFamily::White,
        };
        let budget = match (exp.shots, exp.per_setting) {
            (_, Some(n)) => BudgetPolicy::PerSetting { copies: positive("--per-setting", n)? },
            (Some(n), None) => BudgetPolicy::EqualSplit { total: positive("--shots", n)? },
            (None, None) => BudgetPolicy::default(),
        };
        let initial = initial_state(exp, n_qubits)?;
        Ok(RunConfig {
            noise,
            n_qubits,
            initial,
            budget,
            format: output.and_then(|o| o.format).unwrap_or(default_format),
            out: output.and_then(|o| o.out.clone()),
        })
    }

    pub fn state_name(&self) -> &'static str {
        match self.initial {
            InitialState::Ghz => "ghz",
            InitialState::Ansatz(_) => "ansatz",
        }
    }
}

pub fn check_qubits(n: usize) -> CliResult<usize> {
    if n == 4 || n == 6 {
        Ok(n)
    } else {
        Err(CliError::config("--qubits", format!("must be 4 or 6, got {n}")))
    }
}

fn positive(field: &'static str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::config(field, format!("must be positive, got {x}")))
    }
}

fn initial_state(exp: &ExperimentArgs, n: usize) -> CliResult<InitialState> {
    let given = [("--alpha", exp.alpha), ("--beta", exp.beta), ("--gamma", exp.gamma), ("--lambda", exp.lambda)];
    match exp.state {
        StateArg::Ghz => {
            if let Some((field, _)) = given.iter().find(|(_, v)| v.is_some()) {
                return Err(CliError::config(field, "only applies with --state ansatz"));
            }
            Ok(InitialState::Ghz)
        }
        StateArg::Ansatz => {
            if n != 4 {
                return Err(CliError::config("--qubits", "the ansatz state is defined for 4 qubits"));
            }
            let d = ExperimentalAnsatzParams::EXPERIMENT;
            let params = ExperimentalAnsatzParams {
                alpha: exp.alpha.unwrap_or(d.alpha),
                beta: exp.beta.unwrap_or(d.beta),
                gamma: exp.gamma.unwrap_or(d.gamma),
                lambda: exp.lambda.unwrap_or(d.lambda),
            };
            for (field, v) in given {
                if v.is_some_and(|v| !v.is_finite()) {
                    return Err(CliError::config(field, "must be finite"));
                }
            }
            Ok(InitialState::Ansatz(params))
        }
    }
}

/// Parses `start:end:points`.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |msg: String| CliError::config("--grid", msg);
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad(format!("expected start:end:points, got {spec:?}")));
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad(format!("bad start {:?}", parts[0])))?;
    let end: f64 = parts[1].trim().parse().map_err(|_| bad(format!("bad end {:?}", parts[1])))?;
    let points: usize = parts[2].trim().parse().map_err(|_| bad(format!("bad point count {:?}", parts[2])))?;
    if points == 0 {
        return Err(bad("point count must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
        return Err(bad(format!("need 0 <= start <= end <= 1, got {start}:{end}")));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let step = (end - start) / (points - 1) as f64;
    Ok((0..points).map(|i| if i == points - 1 { end } else { start + step * i as f64 }).collect())
}

pub fn check_probability(field: &'static str, p: f64) -> CliResult<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(CliError::config(field, format!("must lie in [0, 1], got {p}")))
    }
}

pub fn check_trials(trials: usize) -> CliResult<usize> {
    if trials >= MIN_TRIALS {
        Ok(trials)
    } else {
        Err(CliError::config("--trials", format!("at least {MIN_TRIALS} required, got {trials}")))
    }
}

/// Parses `bits:value,bits:value` into basis terms of a common length.
pub fn parse_amplitudes(spec: &str) -> CliResult<(usize, Vec<(f64, String)>)> {
    let bad = |msg: String| CliError::config("--amplitudes", msg);
    let mut terms = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (bits, value) = item.split_once(':').ok_or_else(|| bad(format!("expected bits:value, got {item:?}")))?;
        let value: f64 = value.trim().parse().map_err(|_| bad(format!("bad amplitude {value:?}")))?;
        let bits = bits.trim();
        if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(bad(format!("bad basis label {bits:?}")));
        }
        terms.push((value, bits.to_string()));
    }
    let n = terms.first().map(|t| t.1.len()).ok_or_else(|| bad("no terms given".into()))?;
    if terms.iter().any(|t| t.1.len() != n) {
        return Err(bad("basis labels differ in length".into()));
    }
    if !(2..=6).contains(&n) {
        return Err(bad(format!("{n} qubits; 2 to 6 are supported")));
    }
    if terms.iter().all(|t| t.0 == 0.0) {
        return Err(bad("all amplitudes are zero".into()));
    }
    Ok((n, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:0.25:200").unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!((g[0], g[199]), (0.0, 0.25));
        assert_eq!(parse_grid("0.1:0.1:1").unwrap(), vec![0.1]);
        for bad in ["0:1", "0:2:10", "0.5:0.1:3", "a:1:3", "0:1:0"] {
            assert!(matches!(parse_grid(bad), Err(CliError::Config { field: "--grid", .. })), "{bad}");
        }
    }

    #[test]
    fn amplitude_parsing() {
        let (n, t) = parse_amplitudes("0000:0.8, 1111:0.6").unwrap();
        assert_eq!(n, 4);
        assert_eq!(t[1], (0.6, "1111".to_string()));
        assert!(parse_amplitudes("000:1,11:1").is_err());
        assert!(parse_amplitudes("0a:1").is_err());
        assert!(parse_amplitudes("").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::config("--x", "y").exit_code(), 2);
        assert_eq!(CliError::Core(entsig::Error::NoCrossing).exit_code(), 4);
        assert_eq!(CliError::Core(entsig::Error::NoData("XX".into())).exit_code(), 3);
        assert_eq!(CliError::Core(entsig::Error::NotDetected(0.1)).exit_code(), 2);
    }
}
