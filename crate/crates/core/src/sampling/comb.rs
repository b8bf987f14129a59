//! Comb sampling and uniform comb sampling.
//!
//! Targets are laid end to end on `[0, k)` in a chosen order, each occupying
//! an interval of length `x_i`. Unit interval `b` is bucket `b`. A height `h`
//! picks, in every bucket, the target whose interval contains `b + h`.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{check_marginals, SetDistribution};
use crate::error::{Error, Result};
use crate::game::{MixedStrategy, PureStrategy};
use crate::marginals::PairwiseMarginals;

/// Largest `n` for which all `n!` orders are enumerated exactly.
pub const UNICS_EXACT_MAX_N: usize = 8;

/// Cut heights closer than this are merged.
const CUT_EPS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct BucketLayout {
    k: usize,
    order: Vec<usize>,
    /// `starts[t]` is where the `t`-th target in `order` begins;
    /// `starts[n] = k`.
    starts: Vec<f64>,
}

impl BucketLayout {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `(bucket, lo, hi)` pieces of `target`, with `[lo, hi)` inside `[0, 1]`.
    pub fn segments(&self, target: usize) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        let Some(t) = self.order.iter().position(|&o| o == target) else {
            return out;
        };
        let (a, b) = (self.starts[t], self.starts[t + 1]);
        if b <= a {
            return out;
        }
        let first = (a.floor() as usize).min(self.k - 1);
        let mut bucket = first;
        while (bucket as f64) < b && bucket < self.k {
            let lo = a.max(bucket as f64) - bucket as f64;
            let hi = b.min(bucket as f64 + 1.0) - bucket as f64;
            if hi > lo {
                out.push((bucket, lo, hi));
            }
            bucket += 1;
        }
        out
    }

    /// Targets whose segments contain height `h` in `[0, 1)`, sorted.
    pub fn targets_at(&self, h: f64) -> PureStrategy {
        let n = self.order.len();
        let mut s: Vec<usize> = (0..self.k)
            .map(|b| {
                let pos = b as f64 + h;
                let t = self.starts.partition_point(|&st| st <= pos);
                self.order[(t - 1).min(n - 1)]
            })
            .collect();
        s.sort_unstable();
        PureStrategy::from_sorted(s)
    }

    /// Distinct cut heights in `[0, 1]`, including both ends.
    fn cuts(&self) -> Vec<f64> {
        let mut cuts: Vec<f64> = self
            .starts
            .iter()
            .map(|&st| {
                let f = st - st.floor();
                if f < CUT_EPS || 1.0 - f < CUT_EPS {
                    0.0
                } else {
                    f
                }
            })
            .collect();
        cuts.push(0.0);
        cuts.push(1.0);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < CUT_EPS);
        cuts
    }
}

/// Layout in natural target order.
pub fn comb_layout(x: &[f64], k: usize) -> Result<BucketLayout> {
    let order: Vec<usize> = (0..x.len()).collect();
    comb_layout_ordered(x, k, &order)
}

/// Layout filling targets in the given order.
pub fn comb_layout_ordered(x: &[f64], k: usize, order: &[usize]) -> Result<BucketLayout> {
    check_marginals(x, k)?;
    let n = x.len();
    let mut seen = alloc::vec![false; n];
    if order.len() != n || order.iter().any(|&t| t >= n || core::mem::replace(&mut seen[t], true)) {
        return Err(Error::InvalidInput(format!("order is not a permutation of 0..{n}")));
    }
    let mut starts = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    starts.push(0.0);
    for &t in order {
        acc += x[t].clamp(0.0, 1.0);
        starts.push(acc);
    }
    starts[n] = k as f64;
    for t in (0..n).rev() {
        if starts[t] > starts[t + 1] {
            starts[t] = starts[t + 1];
        }
    }
    Ok(BucketLayout { k, order: order.to_vec(), starts })
}

/// The at most `n + 1` pure strategies cut out by consecutive heights.
pub fn comb_support(layout: &BucketLayout) -> MixedStrategy {
    let cuts = layout.cuts();
    let atoms: Vec<(PureStrategy, f64)> =
        cuts.windows(2).map(|w| (layout.targets_at(0.5 * (w[0] + w[1])), w[1] - w[0])).collect();
    MixedStrategy::from_weights(atoms, layout.n(), layout.k, 0.0).expect("cuts cover [0, 1]")
}

/// Exact pairwise marginals of comb sampling on `layout`.
pub fn comb_pair_marginals(layout: &BucketLayout) -> PairwiseMarginals {
    let mut x = PairwiseMarginals::zeros(layout.n());
    for (s, p) in comb_support(layout).atoms() {
        for &i in s.targets() {
            for &j in s.targets() {
                x.add(i, j, *p);
            }
        }
    }
    x
}

pub fn comb_sample<R: Rng + ?Sized>(layout: &BucketLayout, rng: &mut R) -> PureStrategy {
    layout.targets_at(rng.random::<f64>())
}

/// Comb sampling after a fresh uniform shuffle of the targets.
pub fn uniform_comb_sample<R: Rng + ?Sized>(x: &[f64], k: usize, rng: &mut R) -> Result<PureStrategy> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.shuffle(rng);
    let layout = comb_layout_ordered(x, k, &order)?;
    Ok(comb_sample(&layout, rng))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Distribution of [`uniform_comb_sample`], averaging comb supports over all
/// `n!` orders.
pub fn unics_distribution_exact(x: &[f64], k: usize) -> Result<SetDistribution> {
    let n = x.len();
    if n > UNICS_EXACT_MAX_N {
        return Err(Error::TooLarge(format!("exact uniform comb distribution needs n <= {UNICS_EXACT_MAX_N}")));
    }
    check_marginals(x, k)?;
    let mut order: Vec<usize> = (0..n).collect();
    let fact: f64 = (1..=n).map(|v| v as f64).product();
    let mut entries = Vec::new();
    loop {
        let layout = comb_layout_ordered(x, k, &order)?;
        entries.extend(comb_support(&layout).atoms().iter().map(|(s, p)| (s.clone(), p / fact)));
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(SetDistribution::from_entries(n, k, entries))
}
