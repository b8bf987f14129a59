//! Built-in consistency checks against small exact oracles.

use std::time::{Duration, Instant};

use leaky_core::opt::{
    column_generation, defender_oracle_alg1, defender_oracle_bruteforce, solve_full_lp, solve_marginal_lp,
    ColumnGenOptions, OracleKind, OracleMatrix,
};
use leaky_core::sampling::{exact_indep_distribution, maxent_solve_dual};
use leaky_core::{leakage_utility, pairwise_marginals, GameInstance, LeakageModel, MixedStrategy, PureStrategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::{gen_leakage, gen_random_game, LeakMode};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Level {
    #[default]
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub elapsed: Duration,
}

/// The four-target example: rewards (1, 1, 2, 2), costs (-2, -2, -1, -1),
/// two resources.
pub fn example_game() -> GameInstance {
    GameInstance::new(2, vec![1.0, 1.0, 2.0, 2.0], vec![-2.0, -2.0, -1.0, -1.0]).expect("example game is valid")
}

/// Target 0 always leaks.
pub fn example_leakage() -> LeakageModel {
    LeakageModel::pril(vec![1.0, 0.0, 0.0, 0.0])
}

fn example_strategy(atoms: &[(&[usize], f64)]) -> MixedStrategy {
    let atoms = atoms.iter().map(|(t, p)| (PureStrategy::new(t.to_vec(), 4).expect("valid targets"), *p)).collect();
    MixedStrategy::new(atoms, 4, 2).expect("valid strategy")
}

/// Three strategies with the no-leakage optimal marginals and their
/// utilities when target 0 leaks.
pub fn example_strategies() -> [(MixedStrategy, f64); 3] {
    [
        (example_strategy(&[(&[0, 1], 2.0 / 3.0), (&[2, 3], 1.0 / 3.0)]), -4.0 / 3.0),
        (
            example_strategy(&[
                (&[0, 1], 10.0 / 27.0),
                (&[0, 2], 4.0 / 27.0),
                (&[0, 3], 4.0 / 27.0),
                (&[1, 2], 4.0 / 27.0),
                (&[1, 3], 4.0 / 27.0),
                (&[2, 3], 1.0 / 27.0),
            ]),
            -8.0 / 9.0,
        ),
        (example_strategy(&[(&[0, 1], 5.0 / 9.0), (&[0, 2], 2.0 / 9.0), (&[0, 3], 2.0 / 9.0)]), -1.0 / 3.0),
    ]
}

/// Random symmetric integer matrix whose off-diagonal entries vanish
/// outside a random support of size `m`.
pub fn random_oracle_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> OracleMatrix {
    let mut support: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.random_range(i..n);
        support.swap(i, j);
    }
    support.truncate(m);
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            if i == j || support.contains(&i) || support.contains(&j) {
                let v = rng.random_range(-9i32..=9) as f64;
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
    }
    OracleMatrix::new(n, d, support).expect("matrix has the oracle structure")
}

/// Random coverage in `[0.001, 0.999]^n` summing to `k`.
pub fn random_coverage(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
        let t: f64 = w.iter().sum();
        let x: Vec<f64> = w.iter().map(|v| v * k as f64 / t).collect();
        if x.iter().all(|&v| v < 0.999) {
            return x;
        }
    }
}

fn fail(name: &str, detail: impl Into<String>) -> CliError {
    CliError::Selftest { name: name.to_string(), detail: detail.into() }
}

fn expect_close(name: &str, what: &str, got: f64, want: f64, tol: f64) -> CliResult<()> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(fail(name, format!("{what}: got {got}, expected {want} within {tol}")))
    }
}

fn check_fixtures() -> CliResult<()> {
    const NAME: &str = "fixtures";
    let wrap = |e: CliError| fail(NAME, e.to_string());
    let g = example_game();
    let m = example_leakage();
    let base = solve_marginal_lp(&g).map_err(|e| wrap(e.into()))?;
    expect_close(NAME, "baseline utility", base.utility, 0.0, 1e-9)?;
    for (i, (&got, want)) in base.coverage.iter().zip([2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).enumerate() {
        expect_close(NAME, &format!("baseline coverage of target {i}"), got, want, 1e-9)?;
    }
    for (ms, want) in example_strategies() {
        let x = pairwise_marginals(&ms, 4).map_err(|e| wrap(e.into()))?;
        expect_close(NAME, "strategy utility", leakage_utility(&x, &g, &m), want, 1e-9)?;
    }
    let full = solve_full_lp(&g, &m).map_err(|e| wrap(e.into()))?;
    expect_close(NAME, "full LP utility", full.utility, -1.0 / 3.0, 1e-7)?;
    let cg = column_generation(&g, &m, &ColumnGenOptions::default()).map_err(|e| wrap(e.into()))?;
    expect_close(NAME, "column generation utility", cg.utility, -1.0 / 3.0, 1e-7)
}

fn check_oracle_equivalence(matrices: usize, corrupt: bool) -> CliResult<()> {
    const NAME: &str = "oracle-equivalence";
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    for t in 0..matrices {
        let n = rng.random_range(2..=12);
        let m = rng.random_range(0..=n.min(4));
        let k = rng.random_range(1..=n.min(6));
        let a = random_oracle_matrix(&mut rng, n, m);
        let (_, mut v1) = defender_oracle_alg1(&a, k).map_err(|e| fail(NAME, e.to_string()))?;
        let (_, v2) = defender_oracle_bruteforce(&a, k).map_err(|e| fail(NAME, e.to_string()))?;
        if corrupt {
            v1 = -v1;
        }
        if v1 != v2 {
            return Err(fail(
                NAME,
                format!("matrix {t} (n = {n}, m = {m}, k = {k}): support enumeration {v1}, brute force {v2}"),
            ));
        }
    }
    Ok(())
}

fn check_colgen_vs_full() -> CliResult<()> {
    const NAME: &str = "colgen-vs-full-lp";
    let wrap = |e: CliError| fail(NAME, e.to_string());
    let (n, k) = (8, 4);
    for seed in 0..5u64 {
        let g = gen_random_game(n, k, 1000 + seed).map_err(wrap)?;
        for q in [0.3, 0.7] {
            for mode in [LeakMode::Dirichlet, LeakMode::Adversarial] {
                let model = gen_leakage(n, q, &(0..n).collect::<Vec<_>>(), mode, seed).map_err(wrap)?;
                let full = solve_full_lp(&g, &model).map_err(|e| wrap(e.into()))?;
                for oracle in [OracleKind::Alg1, OracleKind::Brute] {
                    let opts = ColumnGenOptions { oracle, ..Default::default() };
                    let cg = column_generation(&g, &model, &opts).map_err(|e| wrap(e.into()))?;
                    expect_close(NAME, &format!("game {seed}, 1 - p0 = {q}"), cg.utility, full.utility, 1e-6)?;
                }
            }
        }
    }
    Ok(())
}

fn check_moment_matrix() -> CliResult<()> {
    const NAME: &str = "moment-matrix";
    let mut rng = ChaCha8Rng::seed_from_u64(0x1E55A);
    let e = std::f64::consts::E;
    for t in 0..20 {
        let k = 4 + t % 2;
        let x = random_coverage(&mut rng, 8, k);
        let y = exact_indep_distribution(&x, k).map_err(|e| fail(NAME, e.to_string()))?.pairwise_marginals();
        expect_close(NAME, "trace", y.trace(), k as f64, 1e-10)?;
        let ratio = (k as f64 - 2.0) / (k as f64 - 1.0) - 1.0 / e;
        for i in 0..8 {
            if y.get(i, i) < (1.0 - 1.0 / e) * x[i] - 1e-12 {
                return Err(fail(NAME, format!("coverage of target {i} below bound")));
            }
            for j in (0..8).filter(|&j| j != i) {
                if y.get(i, j) / y.get(i, i) < ratio * x[j] - 1e-12 {
                    return Err(fail(NAME, format!("conditional coverage ({i}, {j}) below bound")));
                }
            }
        }
    }
    Ok(())
}

fn check_maxent_residual() -> CliResult<()> {
    const NAME: &str = "maxent-residual";
    let mut rng = ChaCha8Rng::seed_from_u64(0x3E47);
    for _ in 0..10 {
        let x = random_coverage(&mut rng, 10, 4);
        let dual = maxent_solve_dual(&x, 4).map_err(|e| fail(NAME, e.to_string()))?;
        if dual.max_residual() > 1e-6 {
            return Err(fail(NAME, format!("marginal residual {}", dual.max_residual())));
        }
    }
    Ok(())
}

/// Runs the checks for `level` in order, stopping at the first failure.
/// `corrupt_oracle` negates the support-enumeration oracle's value so the
/// failure path can be exercised.
pub fn run(level: Level, corrupt_oracle: bool) -> CliResult<Vec<CheckOutcome>> {
    let mut checks: Vec<(&'static str, Box<dyn Fn() -> CliResult<()>>)> = vec![
        ("fixtures", Box::new(check_fixtures)),
        ("oracle-equivalence", Box::new(move || check_oracle_equivalence(20, corrupt_oracle))),
    ];
    if level == Level::Full {
        checks.push(("colgen-vs-full-lp", Box::new(check_colgen_vs_full)));
        checks.push(("moment-matrix", Box::new(check_moment_matrix)));
        checks.push(("maxent-residual", Box::new(check_maxent_residual)));
    }
    let mut out = Vec::with_capacity(checks.len());
    for (name, check) in checks {
        let start = Instant::now();
        check()?;
        out.push(CheckOutcome { name, elapsed: start.elapsed() });
    }
    Ok(out)
}
