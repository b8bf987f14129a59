//! Restricted master LP over an explicit set of pure strategies.
//!
//! Coverage probabilities are substituted by sums of strategy weights, and
//! every constant payoff term is multiplied by `sum_s theta_s = 1`, so all
//! utility rows have right-hand side zero and the only row needing an
//! artificial variable is the normalization row.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{GameInstance, LeakageModel, MixedStrategy, PureStrategy};
use crate::linprog::{LinearProgram, LpSolution, Sense, Simplex};

/// Strategy weights at or below this are dropped from reported strategies.
const WEIGHT_FLOOR: f64 = 1e-13;

/// Dual information that prices new columns.
///
/// A pure strategy `s` improves the master iff `s^T beta s > omega`.
/// `beta` is row-major `n x n` and is non-zero only on the diagonal and in
/// rows of leaking targets. `rho` holds every row dual of the master.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterDuals {
    pub n: usize,
    pub beta: Vec<f64>,
    pub omega: f64,
    pub rho: Vec<f64>,
}

impl MasterDuals {
    /// Reduced cost of the column of `s`: `s^T beta s - omega`.
    pub fn reduced_cost(&self, s: &PureStrategy) -> f64 {
        let t = s.targets();
        let mut acc = 0.0;
        for &i in t {
            for &j in t {
                acc += self.beta[i * self.n + j];
            }
        }
        acc - self.omega
    }
}

/// Result of one master solve.
#[derive(Debug, Clone)]
pub struct MasterSolution {
    pub lp: LpSolution,
    pub objective: f64,
    pub strategy: MixedStrategy,
}

#[derive(Debug, Clone)]
pub struct MasterProblem {
    game: GameInstance,
    model: LeakageModel,
    leak: Vec<usize>,
    adversarial: bool,
    atoms: Vec<PureStrategy>,
    known: BTreeSet<PureStrategy>,
    simplex: Simplex,
}

impl MasterProblem {
    pub fn new(game: &GameInstance, model: &LeakageModel, initial: Vec<PureStrategy>) -> Result<Self> {
        let n = game.n();
        let leak = model.active_targets();
        let adversarial = model.is_adversarial();
        let nl = leak.len();
        let n_util = 1 + 2 * nl + usize::from(adversarial);
        let mut obj = vec![0.0; n_util];
        match model {
            LeakageModel::Pril { p0, p, .. } => {
                obj[0] = *p0;
                for (a, &i) in leak.iter().enumerate() {
                    obj[1 + a] = p[i];
                    obj[1 + nl + a] = p[i];
                }
            }
            LeakageModel::Adil { p0, .. } => {
                obj[0] = *p0;
                if adversarial {
                    obj[1 + 2 * nl] = 1.0 - p0;
                }
            }
        }
        let mut lp = LinearProgram::new(obj);
        // Every utility is at least min(0, min_j c_j); these bounds never bind.
        let lb = game.costs.iter().fold(0.0f64, |a, &c| a.min(c)) - 1.0;
        for v in 0..1 + 2 * nl {
            lp.set_bounds(v, lb, f64::INFINITY);
        }
        if adversarial {
            lp.set_bounds(1 + 2 * nl, 2.0 * lb, f64::INFINITY);
        }
        let unit = |v: usize| {
            let mut r = vec![0.0; n_util];
            r[v] = 1.0;
            r
        };
        for _j in 0..n {
            lp.add_row(unit(0), Sense::Le, 0.0);
        }
        for a in 0..nl {
            for _j in 0..n {
                lp.add_row(unit(1 + a), Sense::Le, 0.0);
            }
        }
        for a in 0..nl {
            for _j in 0..n {
                lp.add_row(unit(1 + nl + a), Sense::Le, 0.0);
            }
        }
        if adversarial {
            for a in 0..nl {
                let mut r = unit(1 + 2 * nl);
                r[1 + a] = -1.0;
                r[1 + nl + a] = -1.0;
                lp.add_row(r, Sense::Le, 0.0);
            }
        }
        lp.add_row(vec![0.0; n_util], Sense::Eq, 1.0);
        let mut master = MasterProblem {
            game: game.clone(),
            model: model.clone(),
            leak,
            adversarial,
            atoms: Vec::new(),
            known: BTreeSet::new(),
            simplex: Simplex::new(lp)?,
        };
        for s in initial {
            master.add_atom(s)?;
        }
        Ok(master)
    }

    pub fn leak_targets(&self) -> &[usize] {
        &self.leak
    }

    pub fn atoms(&self) -> &[PureStrategy] {
        &self.atoms
    }

    pub fn game(&self) -> &GameInstance {
        &self.game
    }

    pub fn model(&self) -> &LeakageModel {
        &self.model
    }

    pub fn lp(&self) -> &LinearProgram {
        self.simplex.lp()
    }

    fn n_util(&self) -> usize {
        1 + 2 * self.leak.len() + usize::from(self.adversarial)
    }

    /// Constraint column of pure strategy `s`.
    pub fn column(&self, s: &PureStrategy) -> Vec<f64> {
        let g = &self.game;
        let n = g.n();
        let ind = s.indicator(n);
        let b = |v: bool| if v { 1.0 } else { 0.0 };
        let mut col = Vec::with_capacity(self.lp().num_rows());
        for j in 0..n {
            let (r, c) = (g.rewards[j], g.costs[j]);
            col.push(-((r - c) * b(ind[j]) + c));
        }
        for &i in &self.leak {
            let si = b(ind[i]);
            for j in 0..n {
                let (r, c) = (g.rewards[j], g.costs[j]);
                col.push(-((r - c) * si * b(ind[j]) + c * si));
            }
        }
        for &i in &self.leak {
            let si = b(ind[i]);
            for j in 0..n {
                let (r, c) = (g.rewards[j], g.costs[j]);
                let sj = b(ind[j]);
                col.push(-((r - c) * sj - (r - c) * si * sj - c * si + c));
            }
        }
        if self.adversarial {
            col.extend(core::iter::repeat_n(0.0, self.leak.len()));
        }
        col.push(1.0);
        col
    }

    /// Adds `s` as a new column; returns `false` if it is already present.
    pub fn add_atom(&mut self, s: PureStrategy) -> Result<bool> {
        if s.len() != self.game.k {
            return Err(Error::InvalidInput(format!("pure strategy {s} does not have {} targets", self.game.k)));
        }
        if self.known.contains(&s) {
            return Ok(false);
        }
        let col = self.column(&s);
        self.simplex.add_column(0.0, &col)?;
        self.known.insert(s.clone());
        self.atoms.push(s);
        Ok(true)
    }

    pub fn solve(&mut self) -> Result<MasterSolution> {
        if self.atoms.is_empty() {
            return Err(Error::InvalidInput("master problem has no columns".into()));
        }
        let lp = self.simplex.solve();
        if !lp.is_optimal() {
            return Err(Error::Lp(format!("restricted master ended with status {:?}", lp.status)));
        }
        let off = self.n_util();
        let weights = self.atoms.iter().cloned().zip(lp.x[off..].iter().copied()).collect();
        let strategy = MixedStrategy::from_weights(weights, self.game.n(), self.game.k, WEIGHT_FLOOR)?;
        Ok(MasterSolution { objective: lp.objective, strategy, lp })
    }

    pub fn duals(&self, lp: &LpSolution) -> MasterDuals {
        master_duals(self, lp)
    }
}

/// Aggregates the row duals of an optimal master solution into the pricing
/// matrix `beta` and threshold `omega`.
pub fn master_duals(master: &MasterProblem, lp: &LpSolution) -> MasterDuals {
    let g = &master.game;
    let n = g.n();
    let leak = &master.leak;
    let nl = leak.len();
    let y = &lp.duals;
    let mut beta = vec![0.0; n * n];
    let mut konst = 0.0;
    for j in 0..n {
        let (r, c) = (g.rewards[j], g.costs[j]);
        beta[j * n + j] += y[j] * (r - c);
        konst += y[j] * c;
    }
    for (a, &i) in leak.iter().enumerate() {
        for j in 0..n {
            let (r, c) = (g.rewards[j], g.costs[j]);
            let yu = y[n + a * n + j];
            beta[i * n + j] += yu * (r - c);
            beta[i * n + i] += yu * c;
            let yv = y[n + nl * n + a * n + j];
            beta[j * n + j] += yv * (r - c);
            beta[i * n + j] -= yv * (r - c);
            beta[i * n + i] -= yv * c;
            konst += yv * c;
        }
    }
    let y_norm = y[y.len() - 1];
    MasterDuals { n, beta, omega: y_norm - konst, rho: y.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::Combinations;

    fn example() -> (GameInstance, LeakageModel) {
        let g = GameInstance::new(2, vec![1.0, 1.0, 2.0, 2.0], vec![-2.0, -2.0, -1.0, -1.0]).unwrap();
        (g, LeakageModel::pril(vec![1.0, 0.0, 0.0, 0.0]))
    }

    fn all_atoms(n: usize, k: usize) -> Vec<PureStrategy> {
        Combinations::new(n, k).map(PureStrategy::from_sorted).collect()
    }

    #[test]
    fn full_master_on_example_reaches_minus_one_third() {
        let (g, m) = example();
        let mut master = MasterProblem::new(&g, &m, all_atoms(4, 2)).unwrap();
        let sol = master.solve().unwrap();
        assert!((sol.objective + 1.0 / 3.0).abs() < 1e-9, "{}", sol.objective);
    }

    #[test]
    fn priced_reduced_costs_match_lp_reduced_costs() {
        let (g, _) = example();
        for m in [LeakageModel::pril(vec![0.3, 0.2, 0.0, 0.1]), LeakageModel::adil(0.4, vec![0, 2])] {
            let atoms = all_atoms(4, 2);
            let mut master = MasterProblem::new(&g, &m, atoms[..4].to_vec()).unwrap();
            let sol = master.solve().unwrap();
            let duals = master.duals(&sol.lp);
            let off = 1 + 2 * master.leak_targets().len() + usize::from(m.is_adversarial());
            for (t, s) in master.atoms().iter().enumerate() {
                let rc = sol.lp.reduced_costs[off + t];
                assert!((duals.reduced_cost(s) - rc).abs() < 1e-9, "{rc} vs {}", duals.reduced_cost(s));
            }
        }
    }

    #[test]
    fn duplicate_atoms_are_ignored() {
        let (g, m) = example();
        let s = PureStrategy::new(vec![0, 1], 4).unwrap();
        let mut master = MasterProblem::new(&g, &m, vec![s.clone()]).unwrap();
        assert!(!master.add_atom(s).unwrap());
        assert_eq!(master.atoms().len(), 1);
    }
}
