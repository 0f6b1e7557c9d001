use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate, predicted_counts, ShotBudget, Significance};
use crate::error::{Error, Result};
use crate::inequality::{ardehali, mermin, BellInequality};
use crate::noise::{bit_flip_all, experimental_ansatz, white_noise, ExperimentalAnsatzParams};
use crate::quantum::{ghz_state, DensityMatrix, PureState};
use crate::scalar::Real;

pub const DEFAULT_GRID_POINTS: usize = 200;
pub const DEFAULT_TOTAL_COPIES: f64 = 8000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseFamily {
    /// Independent bit flips with probability `p` on every qubit.
    BitFlip,
    /// Admixture `q` of the maximally mixed state.
    White,
}

impl NoiseFamily {
    /// Upper end of the crossing search.
    pub fn search_limit(self) -> f64 {
        match self {
            NoiseFamily::BitFlip => 0.5,
            NoiseFamily::White => 1.0,
        }
    }

    pub fn apply<T: Real>(self, rho: &DensityMatrix<T>, p: T) -> Result<DensityMatrix<T>> {
        match self {
            NoiseFamily::BitFlip => bit_flip_all(rho, p),
            NoiseFamily::White => white_noise(rho, p),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseFamily::BitFlip => "bitflip",
            NoiseFamily::White => "white",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Ghz,
    /// The four-qubit experimental model, always renormalized.
    Ansatz(ExperimentalAnsatzParams),
}

impl InitialState {
    pub fn density<T: Real>(&self, n: usize) -> Result<DensityMatrix<T>> {
        match self {
            InitialState::Ghz => Ok(ghz_state::<T>(n)?.density()),
            InitialState::Ansatz(params) => {
                if n != 4 {
                    return Err(Error::UnsupportedQubitCount(n));
                }
                experimental_ansatz(params)
            }
        }
    }
}

/// How copies are distributed over the settings of each inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetPolicy<T> {
    /// `total` copies split equally over the settings of each inequality.
    EqualSplit { total: T },
    /// The same number of copies in every setting.
    PerSetting { copies: T },
}

impl<T: Real> Default for BudgetPolicy<T> {
    fn default() -> Self {
        BudgetPolicy::EqualSplit { total: T::lit(DEFAULT_TOTAL_COPIES) }
    }
}

impl<T: Real> BudgetPolicy<T> {
    pub fn budget_for(&self, ineq: &BellInequality<T>) -> Result<ShotBudget<T>> {
        let n = ineq.settings().len();
        match *self {
            BudgetPolicy::EqualSplit { total } => ShotBudget::equal_split(total, n),
            BudgetPolicy::PerSetting { copies } => ShotBudget::uniform(copies, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry<T> {
    pub name: String,
    pub violation: T,
    pub error: T,
    pub significance: Significance<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub parameter: T,
    pub fidelity: T,
    pub entries: Vec<SweepEntry<T>>,
}

/// Parameter and GHZ fidelity where the first two inequalities swap order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing<T> {
    pub parameter: T,
    pub fidelity: T,
}

/// A starting state, a noise family and the inequalities compared on it.
#[derive(Debug, Clone)]
pub struct NoisyExperiment<T> {
    noise: NoiseFamily,
    initial: DensityMatrix<T>,
    target: PureState<T>,
    inequalities: Vec<BellInequality<T>>,
    budgets: Vec<ShotBudget<T>>,
}

impl<T: Real> NoisyExperiment<T> {
    /// Mermin against Ardehali on `n` = 4 or 6 qubits.
    pub fn mermin_vs_ardehali(
        noise: NoiseFamily,
        n: usize,
        initial: &InitialState,
        policy: &BudgetPolicy<T>,
    ) -> Result<Self> {
        let ineqs = vec![mermin(n)?, ardehali(n)?];
        Self::new(noise, initial.density(n)?, ineqs, policy)
    }

    pub fn new(
        noise: NoiseFamily,
        initial: DensityMatrix<T>,
        inequalities: Vec<BellInequality<T>>,
        policy: &BudgetPolicy<T>,
    ) -> Result<Self> {
        let n = initial.n_qubits();
        if inequalities.is_empty() {
            return Err(Error::EmptyInequality);
        }
        for ineq in &inequalities {
            ineq.check_state(&initial)?;
        }
        let budgets = inequalities.iter().map(|i| policy.budget_for(i)).collect::<Result<_>>()?;
        Ok(NoisyExperiment { noise, initial, target: ghz_state(n)?, inequalities, budgets })
    }

    pub fn noise(&self) -> NoiseFamily {
        self.noise
    }

    pub fn inequalities(&self) -> &[BellInequality<T>] {
        &self.inequalities
    }

    pub fn budgets(&self) -> &[ShotBudget<T>] {
        &self.budgets
    }

    pub fn state_at(&self, p: T) -> Result<DensityMatrix<T>> {
        self.noise.apply(&self.initial, p)
    }

    /// Predicted-count evaluation of every inequality at noise level `p`.
    pub fn row(&self, p: T) -> Result<SweepRow<T>> {
        let rho = self.state_at(p)?;
        let entries = self
            .inequalities
            .iter()
            .zip(&self.budgets)
            .map(|(ineq, budget)| {
                let report = evaluate(&predicted_counts(&rho, ineq, budget)?, ineq)?;
                Ok(SweepEntry {
                    name: report.name,
                    violation: report.violation,
                    error: report.error,
                    significance: report.significance,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SweepRow { parameter: p, fidelity: rho.fidelity_with_pure(&self.target)?, entries })
    }

    /// Rows for every grid point, in grid order.
    pub fn sweep(&self, grid: &[T]) -> Result<Vec<SweepRow<T>>> {
        check_grid(grid)?;
        grid.par_iter().map(|&p| self.row(p)).collect()
    }

    fn order_at(&self, p: T) -> Result<Ordering> {
        let row = self.row(p)?;
        if row.entries.len() < 2 {
            return Err(Error::Schema("crossing needs two inequalities".into()));
        }
        Ok(row.entries[0].significance.compare(&row.entries[1].significance))
    }

    /// First change in the significance order of the first two inequalities,
    /// located on a `points` grid over `[lo, hi]` and refined by bisection to `tol`.
    pub fn crossing(&self, lo: T, hi: T, points: usize, tol: T) -> Result<Crossing<T>> {
        if points < 2 || !(lo < hi) {
            return Err(Error::Grid(format!("need lo < hi and at least 2 points, got [{lo}, {hi}] x {points}")));
        }
        let grid = uniform_grid(lo, hi, points);
        check_grid(&grid)?;
        let orders = grid.par_iter().map(|&p| self.order_at(p)).collect::<Result<Vec<_>>>()?;
        // points where the order is undecided (equal significances) carry no sign
        let decided: Vec<usize> = (0..points).filter(|&i| orders[i] != Ordering::Equal).collect();
        let (i, j) = decided
            .windows(2)
            .map(|w| (w[0], w[1]))
            .find(|&(i, j)| orders[i] != orders[j])
            .ok_or(Error::NoCrossing)?;
        let (mut a, mut b) = (grid[i], grid[j]);
        let left = orders[i];
        let two = T::lit(2.0);
        while b - a >= tol {
            let mid = (a + b) / two;
            match self.order_at(mid)? {
                Ordering::Equal => return self.crossing_at(mid),
                o if o == left => a = mid,
                _ => b = mid,
            }
        }
        self.crossing_at((a + b) / two)
    }

    fn crossing_at(&self, p: T) -> Result<Crossing<T>> {
        let rho = self.state_at(p)?;
        Ok(Crossing { parameter: p, fidelity: rho.fidelity_with_pure(&self.target)? })
    }
}

fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Grid("empty grid".into()));
    }
    if let Some(p) = grid.iter().find(|&&p| !(p >= T::zero() && p <= T::one())) {
        return Err(Error::Grid(format!("noise parameter {p} outside [0, 1]")));
    }
    Ok(())
}

/// `points` equally spaced values from `lo` to `hi` inclusive.
pub(crate) fn uniform_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    if points == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / T::from_usize(points - 1).expect("grid size");
    (0..points)
        .map(|i| if i == points - 1 { hi } else { lo + step * T::from_usize(i).expect("grid index") })
        .collect()
}

/// [`DEFAULT_GRID_POINTS`] values spanning the family's search interval.
pub fn default_grid<T: Real>(noise: NoiseFamily) -> Vec<T> {
    uniform_grid(T::zero(), T::lit(noise.search_limit()), DEFAULT_GRID_POINTS)
}

/// Sweep of `ineqs` on the noisy `initial` state of `n` qubits.
pub fn significance_sweep<T: Real>(
    ineqs: Vec<BellInequality<T>>,
    noise: NoiseFamily,
    n: usize,
    policy: &BudgetPolicy<T>,
    grid: &[T],
    initial: &InitialState,
) -> Result<Vec<SweepRow<T>>> {
    NoisyExperiment::new(noise, initial.density(n)?, ineqs, policy)?.sweep(grid)
}

/// Mermin/Ardehali crossing on the family's default interval.
pub fn crossing_point<T: Real>(
    noise: NoiseFamily,
    n: usize,
    policy: &BudgetPolicy<T>,
    initial: &InitialState,
) -> Result<Crossing<T>> {
    NoisyExperiment::mermin_vs_ardehali(noise, n, initial, policy)?.crossing(
        T::zero(),
        T::lit(noise.search_limit()),
        DEFAULT_GRID_POINTS,
        T::lit(T::TOL.bisection),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn experiment(noise: NoiseFamily) -> NoisyExperiment<f64> {
        NoisyExperiment::mermin_vs_ardehali(noise, 4, &InitialState::Ghz, &BudgetPolicy::default()).unwrap()
    }

    #[test]
    fn grid_shape() {
        let g: Vec<f64> = default_grid(NoiseFamily::BitFlip);
        assert_eq!(g.len(), 200);
        assert_eq!((g[0], g[199]), (0.0, 0.5));
        assert_eq!(uniform_grid(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn default_budget_split() {
        let e = experiment(NoiseFamily::BitFlip);
        assert_eq!(e.budgets()[0].per_setting()[0], 1000.0);
        assert_eq!(e.budgets()[1].per_setting()[0], 500.0);
    }

    #[test]
    fn clean_ghz_row() {
        let row = experiment(NoiseFamily::BitFlip).row(0.0).unwrap();
        assert!((row.fidelity - 1.0).abs() < 1e-12);
        assert!(row.entries[0].significance.is_infinite());
        assert!(matches!(row.entries[1].significance, Significance::Finite(_)));
    }

    #[test]
    fn ardehali_wins_at_strong_noise() {
        let row = experiment(NoiseFamily::BitFlip).row(0.2).unwrap();
        assert!(row.fidelity < 0.7);
        assert_eq!(row.entries[0].significance.compare(&row.entries[1].significance), Ordering::Less);
    }

    #[test]
    fn sweep_preserves_order_and_rejects_bad_grid() {
        let e = experiment(NoiseFamily::White);
        let grid = [0.3, 0.1, 0.2];
        let rows = e.sweep(&grid).unwrap();
        assert_eq!(rows.iter().map(|r| r.parameter).collect::<Vec<_>>(), grid);
        assert!(matches!(e.sweep(&[0.1, 1.5]), Err(Error::Grid(_))));
        assert!(matches!(e.sweep(&[]), Err(Error::Grid(_))));
    }

    #[test]
    fn no_crossing_on_a_one_sided_interval() {
        let e = experiment(NoiseFamily::BitFlip);
        assert_eq!(e.crossing(0.0, 0.05, 20, 1e-6).unwrap_err(), Error::NoCrossing);
    }

    #[test]
    fn ansatz_needs_four_qubits() {
        let init = InitialState::Ansatz(ExperimentalAnsatzParams::EXPERIMENT);
        assert!(init.density::<f64>(4).is_ok());
        assert_eq!(init.density::<f64>(6).unwrap_err(), Error::UnsupportedQubitCount(6));
    }
}
