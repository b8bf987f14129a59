//! Random instances, leakage generation, the sweep harness and the
//! approximation-bound check for independent sampling.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use leaky_core::opt::{column_generation, solve_full_lp, solve_marginal_lp, ColumnGenOptions, OracleKind};
use leaky_core::sampling::exact_indep_distribution;
use leaky_core::{leakage_utility, GameInstance, LeakageModel, PairwiseMarginals};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::eval::{estimate, Estimate, EvalMode, Sampler, SamplerKind, DEFAULT_SAMPLES};
use crate::io::{fmt12, round12, ModelKind};

pub const CSV_HEADER: [&str; 12] = [
    "game_seed",
    "n",
    "k",
    "model",
    "support_mode",
    "one_minus_p0",
    "algorithm",
    "utility",
    "stderr",
    "basis_utility",
    "runtime_ms",
    "status",
];

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "LEAKY_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Traditional,
    Opt,
    Indep,
    Maxent,
    Unics,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Traditional, Algorithm::Opt, Algorithm::Indep, Algorithm::Maxent, Algorithm::Unics];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Traditional => "traditional",
            Algorithm::Opt => "opt",
            Algorithm::Indep => "indep",
            Algorithm::Maxent => "maxent",
            Algorithm::Unics => "unics",
        }
    }

    fn sampler(self) -> Option<SamplerKind> {
        match self {
            Algorithm::Traditional => Some(SamplerKind::Comb),
            Algorithm::Opt => None,
            Algorithm::Indep => Some(SamplerKind::Indep),
            Algorithm::Maxent => Some(SamplerKind::Maxent),
            Algorithm::Unics => Some(SamplerKind::Unics),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportMode {
    #[default]
    Full,
    /// A random subset of this size, drawn per game.
    Random(usize),
}

impl SupportMode {
    pub fn label(self) -> String {
        match self {
            SupportMode::Full => "full".into(),
            SupportMode::Random(m) => format!("random-{m}"),
        }
    }
}

/// How leak probabilities are spread over the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeakMode {
    /// Uniform Dirichlet weights scaled to `1 - p0`.
    #[default]
    Dirichlet,
    /// `p_i = (1 - p0) / |support|`.
    Uniform,
    /// Adversarial leakage over the support.
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleChoice {
    Alg1,
    Brute,
    #[default]
    Auto,
}

impl From<OracleChoice> for OracleKind {
    fn from(o: OracleChoice) -> Self {
        match o {
            OracleChoice::Alg1 => OracleKind::Alg1,
            OracleChoice::Brute => OracleKind::Brute,
            OracleChoice::Auto => OracleKind::Auto,
        }
    }
}

fn default_model() -> ModelKind {
    ModelKind::Pril
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}
fn default_true() -> bool {
    true
}
fn default_max_iters() -> usize {
    500
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub games: usize,
    /// Values of `1 - p0`.
    pub grid: Vec<f64>,
    #[serde(default = "default_model")]
    pub model: ModelKind,
    #[serde(default)]
    pub support: SupportMode,
    /// Only used by the PRIL model.
    #[serde(default)]
    pub leak_distribution: LeakMode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub evaluation: EvalMode,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub oracle: OracleChoice,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// When false, `runtime_ms` is written as 0 so repeated runs produce
    /// identical files.
    #[serde(default = "default_true")]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.n < 2 || self.k < 1 || self.k > self.n {
            return Err(CliError::input(format!("need 1 <= k <= n and n >= 2, got n = {}, k = {}", self.n, self.k)));
        }
        if self.games < 1 {
            return Err(CliError::input("games must be at least 1"));
        }
        if self.grid.is_empty() || self.grid.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return Err(CliError::input("grid values must lie in [0, 1]"));
        }
        if let SupportMode::Random(m) = self.support {
            if m == 0 || m > self.n {
                return Err(CliError::input(format!("random support size {m} is out of range")));
            }
        }
        if self.algorithms.is_empty() {
            return Err(CliError::input("no algorithms selected"));
        }
        if self.leak_distribution == LeakMode::Adversarial && self.model == ModelKind::Pril {
            return Err(CliError::input("leak_distribution \"adversarial\" needs model \"adil\""));
        }
        Ok(())
    }

    fn leak_mode(&self) -> LeakMode {
        match self.model {
            ModelKind::Adil => LeakMode::Adversarial,
            ModelKind::Pril => self.leak_distribution,
        }
    }

    fn sorted_algorithms(&self) -> Vec<Algorithm> {
        let mut a = self.algorithms.clone();
        a.sort();
        a.dedup();
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub game_seed: u64,
    pub n: usize,
    pub k: usize,
    pub model: ModelKind,
    pub support_mode: String,
    pub one_minus_p0: f64,
    pub algorithm: Algorithm,
    pub utility: Option<f64>,
    pub stderr: Option<f64>,
    pub basis_utility: f64,
    pub runtime_ms: f64,
    pub status: String,
    /// Pairwise marginals behind `utility`, for invariant checks.
    pub marginals: Option<PairwiseMarginals>,
}

impl ExperimentRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn csv_record(&self) -> [String; 12] {
        let opt = |v: Option<f64>| v.map(fmt12).unwrap_or_default();
        [
            self.game_seed.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.model.as_str().to_string(),
            self.support_mode.clone(),
            fmt12(self.one_minus_p0),
            self.algorithm.as_str().to_string(),
            opt(self.utility),
            opt(self.stderr),
            fmt12(self.basis_utility),
            fmt12(self.runtime_ms),
            self.status.clone(),
        ]
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes several integers into one well-spread seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5eed_u64, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// `r_i ~ U[0, 10]`, `c_i ~ U[-10, 0]`.
pub fn gen_random_game(n: usize, k: usize, seed: u64) -> CliResult<GameInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rewards = (0..n).map(|_| rng.random_range(0.0..=10.0)).collect();
    let costs = (0..n).map(|_| rng.random_range(-10.0..=0.0)).collect();
    Ok(GameInstance::new(k, rewards, costs)?)
}

/// Leak probabilities over `support` summing to `one_minus_p0`.
///
/// Dirichlet weights depend on `seed` only, so sweeping `one_minus_p0`
/// with a fixed seed scales one fixed leak direction.
pub fn gen_leakage(
    n: usize,
    one_minus_p0: f64,
    support: &[usize],
    mode: LeakMode,
    seed: u64,
) -> CliResult<LeakageModel> {
    if !(0.0..=1.0).contains(&one_minus_p0) {
        return Err(CliError::input(format!("1 - p0 = {one_minus_p0} is outside [0, 1]")));
    }
    if support.is_empty() && one_minus_p0 > 0.0 {
        return Err(CliError::input("leakage support is empty"));
    }
    if let Some(&i) = support.iter().find(|&&i| i >= n) {
        return Err(CliError::input(format!("support index {i} out of range")));
    }
    let p0 = 1.0 - one_minus_p0;
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    let weights: Vec<f64> = match mode {
        LeakMode::Adversarial => return Ok(LeakageModel::adil(p0, sorted)),
        LeakMode::Uniform => vec![1.0 / support.len().max(1) as f64; support.len()],
        LeakMode::Dirichlet => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g: Vec<f64> = support.iter().map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = g.iter().sum();
            g.iter().map(|v| v / total).collect()
        }
    };
    let mut p = vec![0.0; n];
    for (&i, w) in support.iter().zip(&weights) {
        p[i] = w * one_minus_p0;
    }
    let sum: f64 = p.iter().sum();
    let p0 = (1.0 - sum).max(0.0);
    let support = if one_minus_p0 > 0.0 { sorted } else { Vec::new() };
    Ok(LeakageModel::Pril { p0, p, support })
}

fn elapsed_ms(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    }
}

struct GameContext {
    seed: u64,
    game: GameInstance,
    basis: f64,
    support: Vec<usize>,
    estimates: BTreeMap<Algorithm, (CliResult<Estimate>, f64)>,
}

fn game_context(cfg: &ExperimentConfig, index: usize) -> CliResult<GameContext> {
    let seed = derive_seed(&[cfg.seed, index as u64]);
    let game = gen_random_game(cfg.n, cfg.k, seed)?;
    let base = solve_marginal_lp(&game)?;
    let support = match cfg.support {
        SupportMode::Full => (0..cfg.n).collect(),
        SupportMode::Random(m) => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, 1]));
            let mut s = sample(&mut rng, cfg.n, m).into_vec();
            s.sort_unstable();
            s
        }
    };
    let mut estimates = BTreeMap::new();
    for alg in cfg.sorted_algorithms() {
        let Some(kind) = alg.sampler() else { continue };
        let start = Instant::now();
        let est = Sampler::for_coverage(kind, &base.coverage, cfg.k)
            .and_then(|s| estimate(&s, cfg.n, cfg.evaluation, cfg.samples, derive_seed(&[seed, 2, alg as u64])));
        estimates.insert(alg, (est, elapsed_ms(start, cfg.timing)));
    }
    Ok(GameContext { seed, game, basis: base.utility, support, estimates })
}

fn game_rows(cfg: &ExperimentConfig, index: usize) -> Vec<ExperimentRow> {
    let algorithms = cfg.sorted_algorithms();
    let support_mode = cfg.support.label();
    let ctx = match game_context(cfg, index) {
        Ok(c) => c,
        Err(e) => {
            let seed = derive_seed(&[cfg.seed, index as u64]);
            return cfg
                .grid
                .iter()
                .flat_map(|&q| {
                    let support_mode = support_mode.clone();
                    let status = format!("error: {e}");
                    algorithms.iter().map(move |&algorithm| ExperimentRow {
                        game_seed: seed,
                        n: cfg.n,
                        k: cfg.k,
                        model: cfg.model,
                        support_mode: support_mode.clone(),
                        one_minus_p0: q,
                        algorithm,
                        utility: None,
                        stderr: None,
                        basis_utility: f64::NAN,
                        runtime_ms: 0.0,
                        status: status.clone(),
                        marginals: None,
                    })
                })
                .collect();
        }
    };
    let leak_seed = derive_seed(&[ctx.seed, 3]);
    let mut rows = Vec::with_capacity(cfg.grid.len() * algorithms.len());
    for &q in &cfg.grid {
        let model = gen_leakage(cfg.n, q, &ctx.support, cfg.leak_mode(), leak_seed);
        for &algorithm in &algorithms {
            let start = Instant::now();
            let outcome: CliResult<(f64, Option<f64>, PairwiseMarginals, f64)> =
                model.as_ref().map_err(clone_err).and_then(|model| match algorithm.sampler() {
                    None => {
                        let opts = ColumnGenOptions {
                            oracle: cfg.oracle.into(),
                            max_iters: cfg.max_iters,
                            ..Default::default()
                        };
                        let rep = column_generation(&ctx.game, model, &opts)?;
                        let x = leaky_core::pairwise_marginals(&rep.strategy, cfg.n)?;
                        Ok((rep.utility, None, x, elapsed_ms(start, cfg.timing)))
                    }
                    Some(_) => {
                        let (est, build_ms) = &ctx.estimates[&algorithm];
                        let est = est.as_ref().map_err(clone_err)?;
                        let e = est.evaluate(&ctx.game, model);
                        Ok((e.utility, e.stderr, est.marginals().clone(), build_ms + elapsed_ms(start, cfg.timing)))
                    }
                });
            let (utility, stderr, marginals, runtime_ms, status) = match outcome {
                Ok((u, s, x, ms)) => (Some(u), s, Some(x), ms, "ok".to_string()),
                Err(e) => (None, None, None, elapsed_ms(start, cfg.timing), format!("error: {e}")),
            };
            rows.push(ExperimentRow {
                game_seed: ctx.seed,
                n: cfg.n,
                k: cfg.k,
                model: cfg.model,
                support_mode: support_mode.clone(),
                one_minus_p0: q,
                algorithm,
                utility,
                stderr,
                basis_utility: ctx.basis,
                runtime_ms: if cfg.timing { runtime_ms } else { 0.0 },
                status,
                marginals,
            });
        }
    }
    rows
}

fn clone_err(e: &CliError) -> CliError {
    match e {
        CliError::Input(m) => CliError::Input(m.clone()),
        CliError::SizeGuard(m) => CliError::SizeGuard(m.clone()),
        CliError::Convergence(m) => CliError::Convergence(m.clone()),
        CliError::Selftest { name, detail } => CliError::Selftest { name: name.clone(), detail: detail.clone() },
    }
}

/// Reads [`THREADS_ENV`]; `None` when unset.
pub fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(CliError::input(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

/// Runs every game x grid point x algorithm cell. Rows come back ordered by
/// game, then grid point, then algorithm, whatever the thread schedule.
pub fn run_sweep(cfg: &ExperimentConfig) -> CliResult<Vec<ExperimentRow>> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_cap()? {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    let per_game: Vec<Vec<ExperimentRow>> =
        pool.install(|| (0..cfg.games).into_par_iter().map(|g| game_rows(cfg, g)).collect());
    Ok(per_game.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| CliError::input(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(to_err)?;
    for r in rows {
        w.write_record(r.csv_record()).map_err(to_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ExperimentRow]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// Per-grid-point means over games of successful rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub grid: Vec<f64>,
    pub basis: Vec<f64>,
    pub means: BTreeMap<String, Vec<Option<f64>>>,
    /// Monte Carlo standard error of each mean; `None` when every row of the
    /// cell is exact.
    pub mean_stderr: BTreeMap<String, Vec<Option<f64>>>,
    pub failed_cells: usize,
}

pub fn summarize(cfg: &ExperimentConfig, rows: &[ExperimentRow]) -> SweepSummary {
    let grid = cfg.grid.clone();
    let mut means = BTreeMap::new();
    let mut mean_stderr = BTreeMap::new();
    let algorithms = cfg.sorted_algorithms();
    for &alg in &algorithms {
        let mut m = Vec::with_capacity(grid.len());
        let mut s = Vec::with_capacity(grid.len());
        for &q in &grid {
            let cell: Vec<&ExperimentRow> =
                rows.iter().filter(|r| r.algorithm == alg && r.one_minus_p0 == q && r.is_ok()).collect();
            if cell.is_empty() {
                m.push(None);
                s.push(None);
                continue;
            }
            let count = cell.len() as f64;
            let mean = cell.iter().filter_map(|r| r.utility).sum::<f64>() / count;
            let mc: Vec<f64> = cell.iter().filter_map(|r| r.stderr).collect();
            m.push(Some(round12(mean)));
            s.push((!mc.is_empty()).then(|| round12((mc.iter().map(|e| e * e).sum::<f64>()).sqrt() / count)));
        }
        means.insert(alg.as_str().to_string(), m);
        mean_stderr.insert(alg.as_str().to_string(), s);
    }
    let basis = grid
        .iter()
        .map(|&q| {
            let b: Vec<f64> = rows
                .iter()
                .filter(|r| r.algorithm == algorithms[0] && r.one_minus_p0 == q && r.basis_utility.is_finite())
                .map(|r| r.basis_utility)
                .collect();
            round12(b.iter().sum::<f64>() / b.len().max(1) as f64)
        })
        .collect();
    let failed_cells = rows.iter().filter(|r| !r.is_ok()).count();
    SweepSummary { grid, basis, means, mean_stderr, failed_cells }
}

/// Mean over grid points of `(OPT - basis) / (traditional - basis)`,
/// skipping points where the denominator vanishes.
pub fn relative_loss_ratio(summary: &SweepSummary) -> Option<f64> {
    let opt = summary.means.get("opt")?;
    let trad = summary.means.get("traditional")?;
    let ratios: Vec<f64> = (0..summary.grid.len())
        .filter_map(|i| {
            let (o, t, b) = (opt[i]?, trad[i]?, summary.basis[i]);
            let d = t - b;
            (d.abs() > 1e-9).then(|| (o - b) / d)
        })
        .collect();
    (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndepBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares the exact utility of independent sampling with the
/// approximation bound `((k-2)/(k-1) - 1/e) [OPT - (1-p0) mean(c)]` on
/// payoffs shifted so the smallest cost is zero, under uniform leakage.
pub fn theorem2_check(g: &GameInstance, one_minus_p0: f64) -> CliResult<IndepBoundCheck> {
    let (n, k) = (g.n(), g.k);
    if k < 4 {
        return Err(CliError::input(format!("the bound needs k >= 4, got {k}")));
    }
    let shift = -g.costs.iter().copied().fold(f64::INFINITY, f64::min);
    let gs = g.shifted(shift);
    let model = gen_leakage(n, one_minus_p0, &(0..n).collect::<Vec<_>>(), LeakMode::Uniform, 0)?;
    let x = solve_marginal_lp(&gs)?.coverage;
    let y = exact_indep_distribution(&x, k)?.pairwise_marginals();
    let lhs = leakage_utility(&y, &gs, &model);
    let opt = solve_full_lp(&gs, &model)?.utility;
    let mean_cost = gs.costs.iter().sum::<f64>() / n as f64;
    let ratio = (k as f64 - 2.0) / (k as f64 - 1.0) - 1.0 / std::f64::consts::E;
    let rhs = ratio * (opt - one_minus_p0 * mean_cost);
    Ok(IndepBoundCheck { lhs, rhs, holds: lhs >= rhs - 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        serde_json::from_str(r#"{"n":5,"k":2,"games":2,"grid":[0,0.5],"seed":7,"timing":false}"#).unwrap()
    }

    #[test]
    fn games_are_reproducible_and_valid() {
        let a = gen_random_game(6, 3, 11).unwrap();
        assert_eq!(a, gen_random_game(6, 3, 11).unwrap());
        assert!(a.rewards.iter().all(|r| (0.0..=10.0).contains(r)));
        assert!(a.costs.iter().all(|c| (-10.0..=0.0).contains(c)));
    }

    #[test]
    fn reward_mean_is_five() {
        let mut total = 0.0;
        for s in 0..10_000u64 {
            total += gen_random_game(2, 1, s).unwrap().rewards[0];
        }
        assert!((total / 10_000.0 - 5.0).abs() < 0.1);
    }

    #[test]
    fn leakage_generation() {
        let all = [0, 1, 2, 3];
        match gen_leakage(4, 0.4, &all, LeakMode::Uniform, 0).unwrap() {
            LeakageModel::Pril { p, .. } => {
                for v in p {
                    assert!((v - 0.1).abs() < 1e-15);
                }
            }
            _ => unreachable!(),
        }
        let d = gen_leakage(4, 0.4, &all, LeakMode::Dirichlet, 9).unwrap();
        assert!((1.0 - d.p0() - 0.4).abs() < 1e-12);
        let z = gen_leakage(4, 0.0, &all, LeakMode::Dirichlet, 9).unwrap();
        assert_eq!(z.p0(), 1.0);
        assert!(gen_leakage(4, 0.5, &[], LeakMode::Dirichlet, 9).is_err());
    }

    #[test]
    fn sweep_rows_and_determinism() {
        let mut cfg = small_config();
        cfg.algorithms = vec![Algorithm::Opt, Algorithm::Traditional];
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(csv_string(&rows).unwrap(), csv_string(&run_sweep(&cfg).unwrap()).unwrap());
        for r in rows.iter().filter(|r| r.one_minus_p0 == 0.0) {
            assert!((r.utility.unwrap() - r.basis_utility).abs() < 1e-6);
        }
    }

    #[test]
    fn header_is_fixed() {
        let text = csv_string(&[]).unwrap();
        assert_eq!(
            text.trim_end(),
            "game_seed,n,k,model,support_mode,one_minus_p0,algorithm,utility,stderr,basis_utility,runtime_ms,status"
        );
    }

    #[test]
    fn bound_holds_under_full_coverage() {
        let g = GameInstance::new(4, vec![1.0, 2.0, 3.0, 4.0], vec![-1.0, -2.0, -3.0, -4.0]).unwrap();
        let c = theorem2_check(&g, 0.5).unwrap();
        assert!(c.holds);
        assert!(theorem2_check(&GameInstance::new(3, vec![1.0; 5], vec![0.0; 5]).unwrap(), 0.5).is_err());
    }
}
