use std::fs;
use std::path::Path;

use entsig::export::{format_number, format_significance, report_csv, sweep_csv, to_json};
use entsig::improve::{
    default_parameters, exact_improvement, first_order_rate, perturbative_step, separable_safety_check,
    ImprovementDiagnostics,
};
use entsig::inequality::{ardehali, mermin, BellInequality, InequalityFile, Witness};
use entsig::quantum::PureState;
use entsig::significance::{
    default_grid, evaluate, monte_carlo_study, predicted_counts, sample_counts, CountTable, Crossing,
    MonteCarloSummary, NoisyExperiment, SweepRow,
};
use entsig::{Error, Inequality};
use serde::Serialize;

use crate::args::{
    CountsArgs, CrossingArgs, Format, ImproveArgs, InequalityArg, InequalityArgs, MonteCarloArgs, ReportArgs,
    SweepArgs,
};
use crate::config::{
    check_probability, check_qubits, check_trials, parse_amplitudes, parse_grid, CliError, CliResult, RunConfig,
};

/// Writes to `out`, or to standard output when absent.
fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Output { path: path.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_inequality(which: InequalityArg, n: usize) -> CliResult<Inequality> {
    Ok(match which {
        InequalityArg::Mermin => mermin(n)?,
        InequalityArg::Ardehali => ardehali(n)?,
    })
}

fn experiment(cfg: &RunConfig) -> CliResult<NoisyExperiment<f64>> {
    Ok(NoisyExperiment::mermin_vs_ardehali(cfg.noise, cfg.n_qubits, &cfg.initial, &cfg.budget)?)
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    noise: &'static str,
    qubits: usize,
    state: &'static str,
    rows: &'a [SweepRow<f64>],
}

pub fn sweep(args: &SweepArgs) -> CliResult<()> {
    let cfg = RunConfig::new(&args.experiment, Some(&args.output), Format::Csv)?;
    let grid = match &args.grid {
        Some(spec) => parse_grid(spec)?,
        None => default_grid(cfg.noise),
    };
    let rows = experiment(&cfg)?.sweep(&grid)?;
    let text = match cfg.format {
        Format::Csv => sweep_csv(&rows),
        Format::Json => to_json(&SweepDocument {
            noise: cfg.noise.name(),
            qubits: cfg.n_qubits,
            state: cfg.state_name(),
            rows: &rows,
        }),
    };
    emit(cfg.out.as_deref(), &text)
}

#[derive(Serialize)]
struct CrossingDocument {
    noise: &'static str,
    qubits: usize,
    state: &'static str,
    parameter: f64,
    fidelity: f64,
    tolerance: f64,
}

pub fn crossing(args: &CrossingArgs) -> CliResult<()> {
    let cfg = RunConfig::new(&args.experiment, Some(&args.output), Format::Json)?;
    if args.points < 2 {
        return Err(CliError::config("--points", format!("at least 2 required, got {}", args.points)));
    }
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::config("--tol", format!("must be positive, got {}", args.tol)));
    }
    let limit = cfg.noise.search_limit();
    let Crossing { parameter, fidelity } = match experiment(&cfg)?.crossing(0.0, limit, args.points, args.tol) {
        Err(Error::NoCrossing) => {
            return Err(CliError::NoCrossing(format!(
                "the significance order of mermin{n} and ardehali{n} does not change on [0, {limit}]",
                n = cfg.n_qubits
            )))
        }
        other => other?,
    };
    let doc = CrossingDocument {
        noise: cfg.noise.name(),
        qubits: cfg.n_qubits,
        state: cfg.state_name(),
        parameter,
        fidelity,
        tolerance: args.tol,
    };
    let text = match cfg.format {
        Format::Json => to_json(&doc),
        Format::Csv => format!("p,F\n{},{}\n", format_number(parameter), format_number(fidelity)),
    };
    match &cfg.out {
        Some(path) => {
            println!("p* = {}, F* = {}", format_number(parameter), format_number(fidelity));
            emit(Some(path), &text)
        }
        None => emit(None, &text),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

/// Inequality for a count file: an explicit file, an explicit family, or the
/// family and size encoded in the count file's name (`mermin4`).
fn resolve_inequality(args: &ReportArgs, counts: &CountTable<f64>) -> CliResult<Inequality> {
    if let Some(path) = &args.inequality_file {
        return Ok(InequalityFile::from_json(&read_text(path)?)?.to_inequality()?);
    }
    let name = counts.inequality();
    let family = name.trim_end_matches(|c: char| c.is_ascii_digit());
    let which = match args.inequality {
        Some(w) => w,
        None => match family {
            "mermin" => InequalityArg::Mermin,
            "ardehali" => InequalityArg::Ardehali,
            _ => {
                return Err(CliError::config(
                    "--inequality",
                    format!("count file names {name:?}; pass --inequality or --inequality-file"),
                ))
            }
        },
    };
    let n = match args.qubits {
        Some(n) => n,
        None => match name[family.len()..].parse::<usize>() {
            Ok(n) => n,
            Err(_) => counts
                .settings()
                .first()
                .map(|s| s.label.chars().count())
                .ok_or_else(|| CliError::Data("count file has no settings".into()))?,
        },
    };
    build_inequality(which, check_qubits(n)?)
}

pub fn report(args: &ReportArgs) -> CliResult<()> {
    let counts = CountTable::<f64>::from_json(&read_text(&args.counts)?)?;
    let ineq = resolve_inequality(args, &counts)?;
    let report = evaluate(&counts, &ineq)?;
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => report_csv(&report),
    };
    emit(args.output.out.as_deref(), &text)
}

pub fn counts(args: &CountsArgs) -> CliResult<()> {
    let cfg = RunConfig::new(&args.experiment, None, Format::Json)?;
    let p = check_probability("--p", args.p)?;
    let ineq = build_inequality(args.inequality, cfg.n_qubits)?;
    let rho = cfg.noise.apply(&cfg.initial.density(cfg.n_qubits)?, p)?;
    let budget = cfg.budget.budget_for(&ineq)?;
    let table = if args.sample {
        sample_counts(&rho, &ineq, &budget, args.seed)?
    } else {
        predicted_counts(&rho, &ineq, &budget)?
    };
    let mut text = table.to_json();
    text.push('\n');
    emit(args.out.as_deref(), &text)
}

#[derive(Serialize)]
struct PerturbativeDocument {
    gamma: f64,
    first_order_rate: f64,
    diagnostics: ImprovementDiagnostics<f64>,
}

#[derive(Serialize)]
struct ImproveDocument {
    qubits: usize,
    witness: String,
    a: f64,
    b: f64,
    diagnostics: ImprovementDiagnostics<f64>,
    separable_safe: bool,
    perturbative: Option<PerturbativeDocument>,
}

pub fn improve(args: &ImproveArgs) -> CliResult<()> {
    let (n, terms) = parse_amplitudes(&args.amplitudes)?;
    let refs: Vec<(f64, &str)> = terms.iter().map(|(v, b)| (*v, b.as_str())).collect();
    let psi = PureState::from_basis_terms(n, &refs)?;
    let w = Witness::ghz_projector(n)?;
    let mean = psi.expectation(w.matrix())?;
    let spread = psi.variance(w.matrix())?.sqrt();
    let (default_a, _) = default_parameters(mean, spread);
    let a = args.a.unwrap_or(default_a);
    let b = args.b.unwrap_or(spread * spread / a);
    let result = exact_improvement(&psi, &w, a, b)?;
    let separable_safe = separable_safety_check(&result.improved_witness, &w)?;
    let perturbative = match args.perturbative {
        Some(gamma) => {
            let step = perturbative_step(&psi, &w, gamma)?;
            let rate = first_order_rate(&psi, &w, &step.added_operator.scale(1.0 / gamma))?;
            Some(PerturbativeDocument { gamma, first_order_rate: rate, diagnostics: step.diagnostics })
        }
        None => None,
    };
    let doc = ImproveDocument {
        qubits: n,
        witness: w.name().to_string(),
        a,
        b,
        diagnostics: result.diagnostics,
        separable_safe,
        perturbative,
    };
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&doc),
        Format::Csv => improve_csv(&doc),
    };
    emit(args.output.out.as_deref(), &text)
}

fn improve_csv(doc: &ImproveDocument) -> String {
    let d = &doc.diagnostics;
    let mut rows = vec![
        ("a", format_number(doc.a)),
        ("b", format_number(doc.b)),
        ("expectation_before", format_number(d.expectation_before)),
        ("expectation_after", format_number(d.expectation_after)),
        ("spread_before", format_number(d.spread_before)),
        ("spread_after", format_number(d.spread_after)),
        ("significance_before", format_significance(&d.significance_before)),
        ("significance_after", format_significance(&d.significance_after)),
        ("eigen_residual", format_number(d.eigen_residual)),
        ("added_min_eigenvalue", format_number(d.added_min_eigenvalue)),
        ("separable_safe", doc.separable_safe.to_string()),
    ];
    if let Some(p) = &doc.perturbative {
        rows.push(("perturbative_gamma", format_number(p.gamma)));
        rows.push(("perturbative_significance_after", format_significance(&p.diagnostics.significance_after)));
        rows.push(("first_order_rate", format_number(p.first_order_rate)));
    }
    let mut out = String::from("quantity,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

#[derive(Serialize)]
struct MonteCarloEntry {
    inequality: String,
    #[serde(flatten)]
    summary: MonteCarloSummary<f64>,
}

#[derive(Serialize)]
struct MonteCarloDocument {
    noise: &'static str,
    qubits: usize,
    state: &'static str,
    p: f64,
    seed: u64,
    results: Vec<MonteCarloEntry>,
}

pub fn montecarlo(args: &MonteCarloArgs) -> CliResult<()> {
    let cfg = RunConfig::new(&args.experiment, Some(&args.output), Format::Json)?;
    let p = check_probability("--p", args.p)?;
    let trials = check_trials(args.trials)?;
    let rho = cfg.noise.apply(&cfg.initial.density(cfg.n_qubits)?, p)?;
    let which: Vec<InequalityArg> = match args.inequality {
        Some(w) => vec![w],
        None => vec![InequalityArg::Mermin, InequalityArg::Ardehali],
    };
    let results = which
        .into_iter()
        .map(|w| {
            let ineq: BellInequality<f64> = build_inequality(w, cfg.n_qubits)?;
            let budget = cfg.budget.budget_for(&ineq)?;
            let summary = monte_carlo_study(&rho, &ineq, &budget, trials, args.seed)?;
            Ok(MonteCarloEntry { inequality: ineq.name().to_string(), summary })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let text = match cfg.format {
        Format::Json => to_json(&MonteCarloDocument {
            noise: cfg.noise.name(),
            qubits: cfg.n_qubits,
            state: cfg.state_name(),
            p,
            seed: args.seed,
            results,
        }),
        Format::Csv => montecarlo_csv(&results),
    };
    emit(cfg.out.as_deref(), &text)
}

fn montecarlo_csv(results: &[MonteCarloEntry]) -> String {
    let mut out = String::from(
        "inequality,trials,predicted_V,predicted_E,mean_V,std_V,mean_E,coverage,ratio,min_expected_count\n",
    );
    for r in results {
        let s = &r.summary;
        let fields = [
            r.inequality.clone(),
            s.trials.to_string(),
            format_number(s.predicted_violation),
            format_number(s.predicted_error),
            format_number(s.mean_violation),
            format_number(s.std_violation),
            format_number(s.mean_error),
            format_number(s.coverage),
            s.ratio.map(format_number).unwrap_or_default(),
            format_number(s.min_expected_count),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn inequality(args: &InequalityArgs) -> CliResult<()> {
    let ineq = build_inequality(args.name, check_qubits(args.qubits)?)?;
    let mut text = InequalityFile::from_inequality(&ineq).to_json();
    text.push('\n');
    emit(args.out.as_deref(), &text)
}
