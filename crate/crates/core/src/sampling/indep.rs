//! Independent sampling without replacement: i.i.d. draws from `x / k`
//! until `k` distinct targets have appeared.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{check_marginals, SetDistribution};
use crate::error::{Error, Result};
use crate::game::PureStrategy;

pub const INDEP_EXACT_MAX_N: usize = 10;
pub const INDEP_EXACT_MAX_K: usize = 5;

fn draw_weights(x: &[f64], k: usize) -> Result<Vec<f64>> {
    check_marginals(x, k)?;
    let q: Vec<f64> = x.iter().map(|&v| v.max(0.0) / k as f64).collect();
    let positive = q.iter().filter(|&&v| v > 0.0).count();
    if positive < k {
        return Err(Error::InvalidInput(format!("only {positive} targets have positive coverage, need {k}")));
    }
    Ok(q)
}

pub fn indep_sample_without_replacement<R: Rng + ?Sized>(x: &[f64], k: usize, rng: &mut R) -> Result<PureStrategy> {
    let q = draw_weights(x, k)?;
    let dist = WeightedIndex::new(&q).map_err(|e| Error::InvalidInput(format!("{e}")))?;
    let mut seen = vec![false; x.len()];
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let i = dist.sample(rng);
        if !seen[i] {
            seen[i] = true;
            out.push(i);
        }
    }
    out.sort_unstable();
    Ok(PureStrategy::from_sorted(out))
}

/// Exact set distribution of [`indep_sample_without_replacement`].
///
/// Uses `P(S + i) += P(S) q_i / (1 - q(S))` over subsets, which sums the
/// ordered-product formula over all insertion orders.
pub fn exact_indep_distribution(x: &[f64], k: usize) -> Result<SetDistribution> {
    let n = x.len();
    if n > INDEP_EXACT_MAX_N || k > INDEP_EXACT_MAX_K {
        return Err(Error::TooLarge(format!(
            "exact independent-sampling distribution needs n <= {INDEP_EXACT_MAX_N} and k <= {INDEP_EXACT_MAX_K}"
        )));
    }
    let q = draw_weights(x, k)?;
    let mut f = vec![0.0; 1 << n];
    f[0] = 1.0;
    let mut entries = Vec::new();
    for mask in 0usize..(1 << n) {
        let p = f[mask];
        if p == 0.0 {
            continue;
        }
        let size = mask.count_ones() as usize;
        if size == k {
            let s: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            entries.push((PureStrategy::from_sorted(s), p));
            continue;
        }
        let rest: f64 = (0..n).filter(|&i| mask & (1 << i) == 0).map(|i| q[i]).sum();
        for i in 0..n {
            if mask & (1 << i) == 0 && q[i] > 0.0 {
                f[mask | (1 << i)] += p * q[i] / rest;
            }
        }
    }
    Ok(SetDistribution::from_entries(n, k, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ps(t: &[usize]) -> PureStrategy {
        PureStrategy::from_sorted(t.to_vec())
    }

    #[test]
    fn exact_small_example() {
        let d = exact_indep_distribution(&[1.0, 0.5, 0.5], 2).unwrap();
        assert!((d.probability(&ps(&[0, 1])) - 5.0 / 12.0).abs() < 1e-15);
        assert!((d.probability(&ps(&[0, 2])) - 5.0 / 12.0).abs() < 1e-15);
        assert!((d.probability(&ps(&[1, 2])) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_is_uniform() {
        let d = exact_indep_distribution(&[0.4; 5], 2).unwrap();
        assert_eq!(d.len(), 10);
        for (_, p) in d.entries() {
            assert!((p - 0.1).abs() < 1e-14);
        }
    }

    #[test]
    fn sampler_returns_k_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = indep_sample_without_replacement(&[1.0, 0.5, 0.5], 2, &mut rng).unwrap();
            assert_eq!(s.len(), 2);
        }
    }

    #[test]
    fn too_few_positive_targets() {
        assert!(indep_sample_without_replacement(&[1.0, 0.0, 0.0], 2, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
