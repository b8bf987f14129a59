use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::game::{MixedStrategy, PureStrategy};
use crate::marginals::PairwiseMarginals;

/// Exact distribution over size-`k` subsets, sorted by subset.
#[derive(Debug, Clone, PartialEq)]
pub struct SetDistribution {
    n: usize,
    k: usize,
    entries: Vec<(PureStrategy, f64)>,
}

impl SetDistribution {
    /// Builds a distribution, summing repeated subsets and dropping zeros.
    pub fn from_entries(n: usize, k: usize, entries: impl IntoIterator<Item = (PureStrategy, f64)>) -> Self {
        let mut map: BTreeMap<PureStrategy, f64> = BTreeMap::new();
        for (s, p) in entries {
            *map.entry(s).or_insert(0.0) += p;
        }
        let entries = map.into_iter().filter(|(_, p)| *p > 0.0).collect();
        SetDistribution { n, k, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[(PureStrategy, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probability(&self, s: &PureStrategy) -> f64 {
        self.entries.binary_search_by(|(t, _)| t.cmp(s)).map_or(0.0, |i| self.entries[i].1)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self.entries.iter().map(|(_, p)| p * p.ln()).sum::<f64>()
    }

    pub fn pairwise_marginals(&self) -> PairwiseMarginals {
        let mut x = PairwiseMarginals::zeros(self.n);
        for (s, p) in &self.entries {
            for &i in s.targets() {
                for &j in s.targets() {
                    x.add(i, j, *p);
                }
            }
        }
        x
    }

    /// Converts to a mixed strategy, renormalizing round-off in the total.
    pub fn to_mixed_strategy(&self) -> Result<MixedStrategy> {
        MixedStrategy::from_weights(self.entries.clone(), self.n, self.k, 0.0)
    }
}
