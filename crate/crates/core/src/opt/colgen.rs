//! Column generation and the full enumeration LP.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use crate::combin::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::game::{validate_instance, GameInstance, LeakageModel, MixedStrategy, PureStrategy};
use crate::marginals::{leakage_utility, pairwise_marginals};
use crate::sampling::{comb_layout, comb_support};

use super::marginal::solve_marginal_lp;
use super::master::MasterProblem;
use super::oracle::{
    build_oracle_matrix, defender_oracle_alg1, defender_oracle_bruteforce, OracleMatrix, ALG1_MAX_SUPPORT,
    ENUMERATION_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Alg1,
    Brute,
    /// Support enumeration when `2^m <= C(n, k)`, brute force otherwise.
    Auto,
}

impl OracleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleKind::Alg1 => "alg1",
            OracleKind::Brute => "brute",
            OracleKind::Auto => "auto",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnGenOptions {
    pub oracle: OracleKind,
    pub max_iters: usize,
    /// Absolute tolerance of the optimality certificate.
    pub tol: f64,
}

impl Default for ColumnGenOptions {
    fn default() -> Self {
        ColumnGenOptions { oracle: OracleKind::Auto, max_iters: 500, tol: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Optimal,
    IterationCap,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Optimal => "optimal",
            Termination::IterationCap => "iteration cap",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Exact leakage utility of `strategy`.
    pub utility: f64,
    pub strategy: MixedStrategy,
    /// Number of master solves.
    pub iterations: usize,
    pub oracle_calls: usize,
    /// Filled in by callers that have a clock.
    pub wall_time: Option<Duration>,
    pub termination: Termination,
    /// Master objective after every solve.
    pub master_history: Vec<f64>,
}

fn check_valid(g: &GameInstance, model: &LeakageModel) -> Result<()> {
    let violations = validate_instance(g, model);
    if violations.is_empty() {
        return Ok(());
    }
    let msg: Vec<String> = violations.iter().map(|v| format!("{v}")).collect();
    Err(Error::InvalidInput(msg.join("; ")))
}

fn report(
    g: &GameInstance,
    model: &LeakageModel,
    strategy: MixedStrategy,
    iterations: usize,
    oracle_calls: usize,
    termination: Termination,
    master_history: Vec<f64>,
) -> Result<SolveReport> {
    let x = pairwise_marginals(&strategy, g.n())?;
    Ok(SolveReport {
        utility: leakage_utility(&x, g, model),
        strategy,
        iterations,
        oracle_calls,
        wall_time: None,
        termination,
        master_history,
    })
}

/// Solves the leakage-aware LP over all `C(n, k)` pure strategies at once.
pub fn solve_full_lp(g: &GameInstance, model: &LeakageModel) -> Result<SolveReport> {
    check_valid(g, model)?;
    let (n, k) = (g.n(), g.k);
    let count = binomial(n, k);
    if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("C({n}, {k}) = {count} exceeds {ENUMERATION_LIMIT}")));
    }
    let atoms = Combinations::new(n, k).map(PureStrategy::from_sorted).collect();
    let mut master = MasterProblem::new(g, model, atoms)?;
    let sol = master.solve()?;
    report(g, model, sol.strategy, 1, 0, Termination::Optimal, alloc::vec![sol.objective])
}

fn greedy_strategy(g: &GameInstance) -> PureStrategy {
    let mut idx: Vec<usize> = (0..g.n()).collect();
    idx.sort_by(|&a, &b| g.rewards[b].total_cmp(&g.rewards[a]).then(a.cmp(&b)));
    idx.truncate(g.k);
    idx.sort_unstable();
    PureStrategy::from_sorted(idx)
}

fn resolve_oracle(kind: OracleKind, n: usize, k: usize, m: usize) -> Result<OracleKind> {
    let alg1_ok = m <= ALG1_MAX_SUPPORT;
    let brute_ok = binomial(n, k) <= ENUMERATION_LIMIT;
    match kind {
        OracleKind::Alg1 if !alg1_ok => Err(Error::TooLarge(format!("support of size {m} exceeds {ALG1_MAX_SUPPORT}"))),
        OracleKind::Brute if !brute_ok => Err(Error::TooLarge(format!("C({n}, {k}) exceeds {ENUMERATION_LIMIT}"))),
        OracleKind::Auto => {
            if alg1_ok && (1u128 << m) <= binomial(n, k) {
                Ok(OracleKind::Alg1)
            } else if brute_ok {
                Ok(OracleKind::Brute)
            } else if alg1_ok {
                Ok(OracleKind::Alg1)
            } else {
                Err(Error::TooLarge(format!("no oracle applies to n = {n}, k = {k}, support size {m}")))
            }
        }
        other => Ok(other),
    }
}

fn call_oracle(kind: OracleKind, a: &OracleMatrix, k: usize) -> Result<(PureStrategy, f64)> {
    match kind {
        OracleKind::Brute => defender_oracle_bruteforce(a, k),
        _ => defender_oracle_alg1(a, k),
    }
}

/// Initial columns: the comb support of the no-leakage optimum, plus the
/// strategy covering the `k` highest rewards.
pub fn initial_columns(g: &GameInstance) -> Result<Vec<PureStrategy>> {
    let base = solve_marginal_lp(g)?;
    let layout = comb_layout(&base.coverage, g.k)?;
    let mut cols: Vec<PureStrategy> = comb_support(&layout).atoms().iter().map(|(s, _)| s.clone()).collect();
    let greedy = greedy_strategy(g);
    if !cols.contains(&greedy) {
        cols.push(greedy);
    }
    Ok(cols)
}

pub fn column_generation(g: &GameInstance, model: &LeakageModel, opts: &ColumnGenOptions) -> Result<SolveReport> {
    check_valid(g, model)?;
    let (n, k) = (g.n(), g.k);
    let mut master = MasterProblem::new(g, model, initial_columns(g)?)?;
    let support = master.leak_targets().to_vec();
    let kind = resolve_oracle(opts.oracle, n, k, support.len())?;
    let mut history = Vec::new();
    let mut oracle_calls = 0;
    let mut termination = Termination::IterationCap;
    let mut last = None;
    for _ in 0..opts.max_iters.max(1) {
        let sol = master.solve()?;
        history.push(sol.objective);
        let duals = master.duals(&sol.lp);
        let a = build_oracle_matrix(&duals, n, &support)?;
        let (s, value) = call_oracle(kind, &a, k)?;
        oracle_calls += 1;
        last = Some(sol.strategy);
        if value <= duals.omega + opts.tol || !master.add_atom(s)? {
            termination = Termination::Optimal;
            break;
        }
    }
    let strategy = last.expect("at least one master solve");
    report(g, model, strategy, history.len(), oracle_calls, termination, history)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opt::master::master_duals;
    use alloc::vec;

    fn example() -> (GameInstance, LeakageModel) {
        let g = GameInstance::new(2, vec![1.0, 1.0, 2.0, 2.0], vec![-2.0, -2.0, -1.0, -1.0]).unwrap();
        (g, LeakageModel::pril(vec![1.0, 0.0, 0.0, 0.0]))
    }

    #[test]
    fn full_lp_on_example() {
        let (g, m) = example();
        let rep = solve_full_lp(&g, &m).unwrap();
        assert!((rep.utility + 1.0 / 3.0).abs() < 1e-9);
        for s in rep.strategy.atoms() {
            assert!(s.0.contains(0));
        }
    }

    #[test]
    fn column_generation_on_example_with_both_oracles() {
        let (g, m) = example();
        for oracle in [OracleKind::Alg1, OracleKind::Brute, OracleKind::Auto] {
            let opts = ColumnGenOptions { oracle, ..Default::default() };
            let rep = column_generation(&g, &m, &opts).unwrap();
            assert_eq!(rep.termination, Termination::Optimal);
            assert!((rep.utility + 1.0 / 3.0).abs() < 1e-7, "{}", rep.utility);
            for w in rep.master_history.windows(2) {
                assert!(w[1] >= w[0] - 1e-9);
            }
        }
    }

    #[test]
    fn no_leakage_matches_baseline() {
        let (g, _) = example();
        let rep = column_generation(&g, &LeakageModel::none(4), &ColumnGenOptions::default()).unwrap();
        assert!(rep.utility.abs() < 1e-9);
        assert!(rep.iterations <= 2);
    }

    #[test]
    fn converged_master_certifies_optimality() {
        let (g, m) = example();
        let atoms = Combinations::new(4, 2).map(PureStrategy::from_sorted).collect();
        let mut master = MasterProblem::new(&g, &m, atoms).unwrap();
        let sol = master.solve().unwrap();
        let duals = master_duals(&master, &sol.lp);
        let a = build_oracle_matrix(&duals, 4, master.leak_targets()).unwrap();
        let (_, v) = defender_oracle_bruteforce(&a, 2).unwrap();
        assert!(v <= duals.omega + 1e-7);
    }

    #[test]
    fn greedy_prefers_low_index_on_ties() {
        let g = GameInstance::new(2, vec![1.0, 3.0, 3.0, 3.0], vec![0.0; 4]).unwrap();
        assert_eq!(greedy_strategy(&g).targets(), &[1, 2]);
    }
}
