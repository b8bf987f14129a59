//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion before asserting.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use leaky::bench::{
    gen_leakage, gen_random_game, relative_loss_ratio, run_sweep, summarize, theorem2_check, Algorithm,
    ExperimentConfig, ExperimentRow, LeakMode, SweepSummary,
};
use leaky::selftest::{example_game, example_leakage, example_strategies, random_coverage, random_oracle_matrix};
use leaky_core::combin::Combinations;
use leaky_core::opt::{
    column_generation, defender_oracle_alg1, defender_oracle_bruteforce, solve_full_lp, solve_marginal_lp,
    ColumnGenOptions, OracleKind,
};
use leaky_core::sampling::{
    comb_layout, comb_pair_marginals, comb_support, esp_table, exact_indep_distribution, maxent_pair_marginals,
    maxent_path_distribution, maxent_solve_dual, MaxEntDual,
};
use leaky_core::{leakage_utility, pairwise_marginals, PureStrategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIXTURE_UTILITY_TOL: f64 = 1e-9;
const FIXTURE_OPT_TOL: f64 = 1e-7;
const COLGEN_TOL: f64 = 1e-6;
const ESP_REL_TOL: f64 = 1e-10;
const PATH_TOL: f64 = 1e-12;
const MAXENT_RESIDUAL_TOL: f64 = 1e-6;
const MOMENT_TRACE_TOL: f64 = 1e-10;
const COMB_DIAG_TOL: f64 = 1e-12;
const ORDER_SLACK_EXACT: f64 = 1e-6;
const ORDER_SIGMAS: f64 = 3.0;
const LOSS_RATIO_RANGE: (f64, f64) = (0.3, 0.8);
const PSD_TOL: f64 = 1e-9;
const MOMENT_TOL: f64 = 1e-9;
const MONOTONE_TOL: f64 = 1e-7;

fn report(id: u32, title: &str, failures: &[String], elapsed: Duration, budget: Option<Duration>) {
    let mut failures = failures.to_vec();
    if let Some(b) = budget {
        if elapsed > b {
            failures.push(format!("took {elapsed:?}, budget {b:?}"));
        }
    }
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    // Written to the raw stream so the line shows even when output is captured.
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {id} [{verdict}] {title} ({:.2} s)", elapsed.as_secs_f64());
    for f in failures.iter().take(10) {
        let _ = writeln!(err, "    {f}");
    }
    drop(err);
    assert!(failures.is_empty(), "criterion {id} failed: {} problems", failures.len());
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

#[test]
fn criterion_1_example_fixtures() {
    let start = Instant::now();
    let mut f = Vec::new();
    let g = example_game();
    let m = example_leakage();
    let base = solve_marginal_lp(&g).unwrap();
    check(&mut f, base.utility.abs() <= FIXTURE_UTILITY_TOL, || format!("baseline utility {}", base.utility));
    for (i, want) in [2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0].into_iter().enumerate() {
        let got = base.coverage[i];
        check(&mut f, (got - want).abs() <= FIXTURE_UTILITY_TOL, || format!("coverage {i}: {got}"));
    }
    for (ms, want) in example_strategies() {
        let u = leakage_utility(&pairwise_marginals(&ms, 4).unwrap(), &g, &m);
        check(&mut f, (u - want).abs() <= FIXTURE_UTILITY_TOL, || format!("strategy utility {u}, expected {want}"));
    }
    let full = solve_full_lp(&g, &m).unwrap().utility;
    check(&mut f, (full + 1.0 / 3.0).abs() <= FIXTURE_OPT_TOL, || format!("full LP {full}"));
    for oracle in [OracleKind::Alg1, OracleKind::Brute] {
        let cg = column_generation(&g, &m, &ColumnGenOptions { oracle, ..Default::default() }).unwrap().utility;
        check(&mut f, (cg + 1.0 / 3.0).abs() <= FIXTURE_OPT_TOL, || format!("column generation ({oracle:?}) {cg}"));
    }
    report(1, "example fixtures", &f, start.elapsed(), Some(Duration::from_secs(1)));
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for t in 0..200 {
        let n = rng.random_range(2..=12);
        let m = rng.random_range(0..=n.min(4));
        let k = rng.random_range(1..=n.min(6));
        let a = random_oracle_matrix(&mut rng, n, m);
        let (_, v1) = defender_oracle_alg1(&a, k).unwrap();
        let (_, v2) = defender_oracle_bruteforce(&a, k).unwrap();
        check(&mut f, v1 == v2, || format!("matrix {t} (n = {n}, m = {m}, k = {k}): {v1} vs {v2}"));
    }
    report(2, "support enumeration equals brute force", &f, start.elapsed(), Some(Duration::from_secs(10)));
}

#[test]
fn criterion_3_column_generation_matches_full_lp() {
    let start = Instant::now();
    let mut f = Vec::new();
    let (n, k) = (8, 4);
    let all: Vec<usize> = (0..n).collect();
    for game in 0..20u64 {
        let g = gen_random_game(n, k, 3000 + game).unwrap();
        for mode in [LeakMode::Dirichlet, LeakMode::Adversarial] {
            for q in [0.3, 0.7] {
                let model = gen_leakage(n, q, &all, mode, game).unwrap();
                let full = solve_full_lp(&g, &model).unwrap().utility;
                let cg = column_generation(&g, &model, &ColumnGenOptions::default()).unwrap().utility;
                check(&mut f, (cg - full).abs() <= COLGEN_TOL, || {
                    format!("game {game}, {mode:?}, 1 - p0 = {q}: {cg} vs {full}")
                });
            }
        }
    }
    report(3, "column generation equals full LP", &f, start.elapsed(), Some(Duration::from_secs(120)));
}

fn dual_from_alpha(alpha: &[f64]) -> MaxEntDual {
    MaxEntDual {
        alpha: alpha.to_vec(),
        log_alpha: alpha.iter().map(|a| a.ln()).collect(),
        pinned_in: vec![],
        pinned_out: vec![],
        residual: vec![0.0; alpha.len()],
        iterations: 0,
    }
}

fn brute_esp(alpha: &[f64], k: usize) -> f64 {
    Combinations::new(alpha.len(), k).map(|s| s.iter().map(|&i| alpha[i]).product::<f64>()).sum()
}

#[test]
fn criterion_4_max_entropy() {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for t in 0..50 {
        let n = rng.random_range(1..=10);
        let k = rng.random_range(1..=n);
        let alpha: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..5.0)).collect();
        let got = esp_table(&alpha, k).unwrap().value(k, n);
        let want = brute_esp(&alpha, k);
        check(&mut f, (got - want).abs() <= ESP_REL_TOL * want, || format!("(a) case {t}: {got} vs {want}"));
    }
    for t in 0..50 {
        let n = rng.random_range(2..=8);
        let k = rng.random_range(1..=n);
        let alpha: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..5.0)).collect();
        let total = brute_esp(&alpha, k);
        let paths = maxent_path_distribution(&dual_from_alpha(&alpha), k).unwrap();
        for s in Combinations::new(n, k) {
            let want = s.iter().map(|&i| alpha[i]).product::<f64>() / total;
            let got = paths.probability(&PureStrategy::new(s.to_vec(), n).unwrap());
            check(&mut f, (got - want).abs() <= PATH_TOL, || format!("(b) case {t}, set {s:?}: {got} vs {want}"));
        }
    }
    for t in 0..50 {
        let x = random_coverage(&mut rng, 10, 4);
        let dual = maxent_solve_dual(&x, 4).unwrap();
        let diag = maxent_pair_marginals(&dual, 4).unwrap().diagonal();
        let res = diag.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        check(&mut f, res <= MAXENT_RESIDUAL_TOL, || format!("(c) case {t}: residual {res}"));
    }
    report(4, "max-entropy partition function, sampler and dual", &f, start.elapsed(), None);
}

#[test]
fn criterion_5_independent_sampling_bounds() {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let e = std::f64::consts::E;
    for t in 0..50 {
        let k = if t % 2 == 0 { 4 } else { 5 };
        let x = random_coverage(&mut rng, 8, k);
        let y = exact_indep_distribution(&x, k).unwrap().pairwise_marginals();
        let ratio = (k as f64 - 2.0) / (k as f64 - 1.0) - 1.0 / e;
        check(&mut f, (y.trace() - k as f64).abs() <= MOMENT_TRACE_TOL, || format!("case {t}: trace {}", y.trace()));
        for i in 0..8 {
            let yii = y.get(i, i);
            check(&mut f, yii >= (1.0 - 1.0 / e) * x[i], || format!("case {t}: y[{i},{i}] = {yii}"));
            for j in (0..8).filter(|&j| j != i) {
                let r = y.get(i, j) / yii;
                check(&mut f, r >= ratio * x[j], || format!("case {t}: y[{i},{j}]/y[{i},{i}] = {r}"));
            }
        }
    }
    report(5, "independent sampling coverage bounds", &f, start.elapsed(), Some(Duration::from_secs(60)));
}

#[test]
fn criterion_6_independent_sampling_utility_bound() {
    let start = Instant::now();
    let mut f = Vec::new();
    for game in 0..50u64 {
        let g = gen_random_game(8, 4, 6000 + game).unwrap();
        for q in [0.0, 0.5, 1.0] {
            let c = theorem2_check(&g, q).unwrap();
            check(&mut f, c.holds, || format!("game {game}, 1 - p0 = {q}: {} < {}", c.lhs, c.rhs));
        }
    }
    report(6, "independent sampling utility bound", &f, start.elapsed(), None);
}

#[test]
fn criterion_7_comb_support() {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..100 {
        let x = random_coverage(&mut rng, 10, 4);
        let layout = comb_layout(&x, 4).unwrap();
        let size = comb_support(&layout).support_size();
        check(&mut f, size <= 11, || format!("case {t}: support {size}"));
        let diag = comb_pair_marginals(&layout).diagonal();
        for (i, (a, b)) in diag.iter().zip(&x).enumerate() {
            check(&mut f, (a - b).abs() <= COMB_DIAG_TOL, || format!("case {t}, target {i}: {a} vs {b}"));
        }
    }
    report(7, "comb sampling support and marginals", &f, start.elapsed(), None);
}

struct Reproduction {
    config: ExperimentConfig,
    rows: Vec<ExperimentRow>,
    summary: SweepSummary,
    elapsed: Duration,
}

fn reproduction() -> &'static Reproduction {
    static RUN: OnceLock<Reproduction> = OnceLock::new();
    RUN.get_or_init(|| {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{"n": 10, "k": 5, "games": 50, "model": "pril", "support": "full",
                "grid": [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
                "seed": 8, "timing": false}"#,
        )
        .unwrap();
        let start = Instant::now();
        let rows = run_sweep(&config).unwrap();
        let summary = summarize(&config, &rows);
        Reproduction { config, rows, summary, elapsed: start.elapsed() }
    })
}

#[test]
fn criterion_8_simulated_payoff_reproduction() {
    let run = reproduction();
    let s = &run.summary;
    let mut f = Vec::new();
    check(&mut f, s.failed_cells == 0, || format!("{} failed cells", s.failed_cells));
    let mean = |a: Algorithm, i: usize| s.means[a.as_str()][i].unwrap();
    let sigma = |a: Algorithm, i: usize| s.mean_stderr[a.as_str()][i].unwrap_or(0.0);
    // Monte Carlo cells get 3 sigma, never less than the exact slack.
    let slack = |hi: Algorithm, lo: Algorithm, i: usize| {
        let mc = (sigma(hi, i).powi(2) + sigma(lo, i).powi(2)).sqrt();
        (ORDER_SIGMAS * mc).max(ORDER_SLACK_EXACT)
    };
    use Algorithm::*;
    for (i, &q) in s.grid.iter().enumerate() {
        let basis = s.basis[i];
        check(&mut f, basis >= mean(Opt, i) - ORDER_SLACK_EXACT, || format!("1 - p0 = {q}: basis < OPT"));
        for chain in [[Opt, Maxent, Traditional], [Opt, Unics, Traditional]] {
            for w in chain.windows(2) {
                let (hi, lo) = (w[0], w[1]);
                check(&mut f, mean(hi, i) >= mean(lo, i) - slack(hi, lo, i), || {
                    format!("1 - p0 = {q}: {} {} < {} {}", hi.as_str(), mean(hi, i), lo.as_str(), mean(lo, i))
                });
            }
        }
    }
    let ratio = relative_loss_ratio(s);
    let _ = writeln!(std::io::stderr(), "    relative loss ratio {ratio:?}");
    check(&mut f, ratio.is_some_and(|r| (LOSS_RATIO_RANGE.0..=LOSS_RATIO_RANGE.1).contains(&r)), || {
        format!("relative loss ratio {ratio:?}")
    });
    report(8, "mean utility ordering and relative loss", &f, run.elapsed, Some(Duration::from_secs(30 * 60)));
}

#[test]
fn criterion_9_monotonicity_and_feasibility() {
    let start = Instant::now();
    let run = reproduction();
    let mut f = Vec::new();
    let k = run.config.k as f64;
    let mut opt_by_game: std::collections::BTreeMap<u64, Vec<(f64, f64)>> = Default::default();
    for r in &run.rows {
        if r.algorithm == Algorithm::Opt {
            opt_by_game.entry(r.game_seed).or_default().push((r.one_minus_p0, r.utility.unwrap_or(f64::NAN)));
        }
        let Some(x) = &r.marginals else {
            f.push(format!("game {}, {}: no marginals", r.game_seed, r.algorithm.as_str()));
            continue;
        };
        let tag = || format!("game {}, {}, 1 - p0 = {}", r.game_seed, r.algorithm.as_str(), r.one_minus_p0);
        let eig = x.min_eigenvalue();
        check(&mut f, eig >= -PSD_TOL, || format!("{}: min eigenvalue {eig}", tag()));
        check(&mut f, (x.trace() - k).abs() <= MOMENT_TOL, || format!("{}: trace {}", tag(), x.trace()));
        check(&mut f, (x.entry_sum() - k * k).abs() <= MOMENT_TOL, || format!("{}: sum {}", tag(), x.entry_sum()));
    }
    for (seed, mut pts) in opt_by_game {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pts.windows(2) {
            check(&mut f, w[1].1 <= w[0].1 + MONOTONE_TOL, || {
                format!(
                    "game {seed}: OPT rises from {} to {} between 1 - p0 = {} and {}",
                    w[0].1, w[1].1, w[0].0, w[1].0
                )
            });
        }
    }
    report(9, "OPT monotone in leakage, marginals feasible", &f, start.elapsed() + run.elapsed, None);
}
