//! Leakage utilities of sampler-induced strategies, exact or by Monte Carlo.

use std::fmt;
use std::str::FromStr;

use leaky_core::opt::solve_marginal_lp;
use leaky_core::sampling::{
    comb_layout, comb_layout_ordered, comb_pair_marginals, comb_sample, exact_indep_distribution,
    indep_sample_without_replacement, maxent_pair_marginals, maxent_sample, maxent_solve_dual,
    unics_distribution_exact, uniform_comb_sample, MaxEntDual, INDEP_EXACT_MAX_K, INDEP_EXACT_MAX_N, UNICS_EXACT_MAX_N,
};
use leaky_core::{
    leakage_utility, pairwise_marginals, GameInstance, LeakageModel, MixedStrategy, PairwiseMarginals, PureStrategy,
};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLES: usize = 100_000;
/// Monte Carlo draws are split into this many batches for the standard error.
pub const MC_BATCHES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    /// Comb sampling in natural target order.
    Comb,
    Unics,
    Indep,
    Maxent,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 4] = [SamplerKind::Comb, SamplerKind::Unics, SamplerKind::Indep, SamplerKind::Maxent];

    pub fn as_str(self) -> &'static str {
        match self {
            SamplerKind::Comb => "comb",
            SamplerKind::Unics => "unics",
            SamplerKind::Indep => "indep",
            SamplerKind::Maxent => "maxent",
        }
    }

    /// Whether exact pairwise marginals are computable for this size.
    pub fn has_exact(self, n: usize, k: usize) -> bool {
        match self {
            SamplerKind::Comb | SamplerKind::Maxent => true,
            SamplerKind::Unics => n <= UNICS_EXACT_MAX_N,
            SamplerKind::Indep => n <= INDEP_EXACT_MAX_N && k <= INDEP_EXACT_MAX_K,
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplerKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        SamplerKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| CliError::input(format!("unknown sampler {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    Exact,
    MonteCarlo,
    /// Exact where available, Monte Carlo otherwise.
    #[default]
    Auto,
}

/// A sampler's marginals prepared for a game.
pub enum Sampler {
    Comb(leaky_core::sampling::BucketLayout),
    Unics { x: Vec<f64>, k: usize },
    Indep { x: Vec<f64>, k: usize },
    Maxent { dual: MaxEntDual, k: usize },
    Strategy { ms: MixedStrategy, index: WeightedIndex<f64> },
}

impl Sampler {
    /// Prepares `kind` on the no-leakage optimal coverage of `g`.
    pub fn for_game(kind: SamplerKind, g: &GameInstance) -> CliResult<Self> {
        let x = solve_marginal_lp(g)?.coverage;
        Self::for_coverage(kind, &x, g.k)
    }

    pub fn for_coverage(kind: SamplerKind, x: &[f64], k: usize) -> CliResult<Self> {
        Ok(match kind {
            SamplerKind::Comb => Sampler::Comb(comb_layout(x, k)?),
            SamplerKind::Unics => {
                comb_layout(x, k)?;
                Sampler::Unics { x: x.to_vec(), k }
            }
            SamplerKind::Indep => {
                let positive = x.iter().filter(|&&v| v > 0.0).count();
                if positive < k {
                    return Err(CliError::input(format!("only {positive} targets have positive coverage")));
                }
                comb_layout(x, k)?;
                Sampler::Indep { x: x.to_vec(), k }
            }
            SamplerKind::Maxent => Sampler::Maxent { dual: maxent_solve_dual(x, k)?, k },
        })
    }

    pub fn for_strategy(ms: MixedStrategy) -> Self {
        let index = WeightedIndex::new(ms.atoms().iter().map(|a| a.1)).expect("positive atom weights");
        Sampler::Strategy { ms, index }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> CliResult<PureStrategy> {
        Ok(match self {
            Sampler::Comb(layout) => comb_sample(layout, rng),
            Sampler::Unics { x, k } => uniform_comb_sample(x, *k, rng)?,
            Sampler::Indep { x, k } => indep_sample_without_replacement(x, *k, rng)?,
            Sampler::Maxent { dual, k } => maxent_sample(dual, *k, rng)?,
            Sampler::Strategy { ms, index } => ms.atoms()[index.sample(rng)].0.clone(),
        })
    }

    /// Exact pairwise marginals, or a size-guard error when unavailable.
    pub fn exact_marginals(&self, n: usize) -> CliResult<PairwiseMarginals> {
        Ok(match self {
            Sampler::Comb(layout) => comb_pair_marginals(layout),
            Sampler::Unics { x, k } => unics_distribution_exact(x, *k)?.pairwise_marginals(),
            Sampler::Indep { x, k } => exact_indep_distribution(x, *k)?.pairwise_marginals(),
            Sampler::Maxent { dual, k } => maxent_pair_marginals(dual, *k)?,
            Sampler::Strategy { ms, .. } => pairwise_marginals(ms, n)?,
        })
    }

    fn exact_available(&self, n: usize) -> bool {
        match self {
            Sampler::Unics { .. } => n <= UNICS_EXACT_MAX_N,
            Sampler::Indep { k, .. } => n <= INDEP_EXACT_MAX_N && *k <= INDEP_EXACT_MAX_K,
            _ => true,
        }
    }
}

/// Pairwise marginals ready to be evaluated under any leakage model.
#[derive(Debug, Clone)]
pub enum Estimate {
    Exact(PairwiseMarginals),
    MonteCarlo { pooled: PairwiseMarginals, batches: Vec<PairwiseMarginals> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub utility: f64,
    pub stderr: Option<f64>,
}

impl Estimate {
    pub fn is_exact(&self) -> bool {
        matches!(self, Estimate::Exact(_))
    }

    pub fn marginals(&self) -> &PairwiseMarginals {
        match self {
            Estimate::Exact(x) | Estimate::MonteCarlo { pooled: x, .. } => x,
        }
    }

    pub fn evaluate(&self, g: &GameInstance, model: &LeakageModel) -> Evaluation {
        match self {
            Estimate::Exact(x) => Evaluation { utility: leakage_utility(x, g, model), stderr: None },
            Estimate::MonteCarlo { pooled, batches } => {
                let utility = leakage_utility(pooled, g, model);
                let stderr = if batches.len() > 1 {
                    let us: Vec<f64> = batches.iter().map(|b| leakage_utility(b, g, model)).collect();
                    let mean = us.iter().sum::<f64>() / us.len() as f64;
                    let var = us.iter().map(|u| (u - mean).powi(2)).sum::<f64>() / (us.len() - 1) as f64;
                    Some((var / us.len() as f64).sqrt())
                } else {
                    None
                };
                Evaluation { utility, stderr }
            }
        }
    }
}

/// Adds one draw's contribution to `acc`. Uniform comb sampling contributes
/// the exact comb marginals of a random order instead of one of its sets.
fn accumulate_draw(sampler: &Sampler, n: usize, rng: &mut ChaCha8Rng, acc: &mut [f64]) -> CliResult<()> {
    if let Sampler::Unics { x, k } = sampler {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let y = comb_pair_marginals(&comb_layout_ordered(x, *k, &order)?);
        for (a, v) in acc.iter_mut().zip(y.as_row_major()) {
            *a += v;
        }
        return Ok(());
    }
    let s = sampler.sample(rng)?;
    for &i in s.targets() {
        for &j in s.targets() {
            acc[i * n + j] += 1.0;
        }
    }
    Ok(())
}

/// Averages `s s^T` over `samples` draws split into [`MC_BATCHES`] batches.
pub fn monte_carlo_marginals(sampler: &Sampler, n: usize, samples: usize, seed: u64) -> CliResult<Estimate> {
    if samples == 0 {
        return Err(CliError::input("Monte Carlo evaluation needs at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nb = MC_BATCHES.min(samples);
    let mut batches = Vec::with_capacity(nb);
    let mut pooled = vec![0.0; n * n];
    for b in 0..nb {
        let size = samples / nb + usize::from(b < samples % nb);
        let mut acc = vec![0.0; n * n];
        for _ in 0..size {
            accumulate_draw(sampler, n, &mut rng, &mut acc)?;
        }
        for (p, a) in pooled.iter_mut().zip(&acc) {
            *p += a;
        }
        let scaled = acc.iter().map(|v| v / size as f64).collect();
        batches.push(PairwiseMarginals::from_row_major(n, scaled)?);
    }
    let pooled = PairwiseMarginals::from_row_major(n, pooled.iter().map(|v| v / samples as f64).collect())?;
    Ok(Estimate::MonteCarlo { pooled, batches })
}

/// Builds the estimate for `sampler` under `mode`.
pub fn estimate(sampler: &Sampler, n: usize, mode: EvalMode, samples: usize, seed: u64) -> CliResult<Estimate> {
    match mode {
        EvalMode::Exact => {
            if !sampler.exact_available(n) {
                return Err(CliError::SizeGuard(format!(
                    "exact evaluation of this sampler is not available for n = {n}"
                )));
            }
            Ok(Estimate::Exact(sampler.exact_marginals(n)?))
        }
        EvalMode::MonteCarlo => monte_carlo_marginals(sampler, n, samples, seed),
        EvalMode::Auto => match sampler.exact_available(n) {
            true => Ok(Estimate::Exact(sampler.exact_marginals(n)?)),
            false => monte_carlo_marginals(sampler, n, samples, seed),
        },
    }
}

/// One-shot evaluation of a sampler on a game.
pub fn evaluate_sampler(
    kind: SamplerKind,
    g: &GameInstance,
    model: &LeakageModel,
    mode: EvalMode,
    samples: usize,
    seed: u64,
) -> CliResult<(Evaluation, bool)> {
    let sampler = Sampler::for_game(kind, g)?;
    let est = estimate(&sampler, g.n(), mode, samples, seed)?;
    Ok((est.evaluate(g, model), est.is_exact()))
}
