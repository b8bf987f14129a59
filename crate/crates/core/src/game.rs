//! Game instances, leakage models and defender strategies.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Tolerance on probability normalizations (simplex, mixed strategies).
pub const PROB_TOL: f64 = 1e-12;

/// A zero-sum security game: `k` resources protect `n` targets.
///
/// `rewards[i]` is the defender's utility when attacked target `i` is
/// covered, `costs[i]` when it is uncovered.
#[derive(Debug, Clone, PartialEq)]
pub struct GameInstance {
    pub k: usize,
    pub rewards: Vec<f64>,
    pub costs: Vec<f64>,
}

impl GameInstance {
    /// Builds an instance and rejects it if any invariant fails.
    pub fn new(k: usize, rewards: Vec<f64>, costs: Vec<f64>) -> Result<Self> {
        let g = GameInstance { k, rewards, costs };
        let report = g.violations();
        match report.first() {
            None => Ok(g),
            Some(v) => Err(Error::InvalidInput(format!("{v}"))),
        }
    }

    pub fn n(&self) -> usize {
        self.rewards.len()
    }

    /// The same game with every payoff shifted by `delta`.
    pub fn shifted(&self, delta: f64) -> GameInstance {
        GameInstance {
            k: self.k,
            rewards: self.rewards.iter().map(|r| r + delta).collect(),
            costs: self.costs.iter().map(|c| c + delta).collect(),
        }
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n();
        if n < 2 {
            out.push(Violation::new(ViolationKind::TooFewTargets, format!("n = {n}")));
        }
        if self.costs.len() != n {
            out.push(Violation::new(
                ViolationKind::LengthMismatch,
                format!("{} rewards but {} costs", n, self.costs.len()),
            ));
        }
        if self.k < 1 || self.k > n {
            out.push(Violation::new(ViolationKind::KOutOfRange, format!("k = {} with n = {n}", self.k)));
        }
        for (i, (&r, &c)) in self.rewards.iter().zip(&self.costs).enumerate() {
            if !r.is_finite() || !c.is_finite() {
                out.push(Violation::new(ViolationKind::NonFinite, format!("target {i}")));
            } else if c > r {
                out.push(Violation::new(ViolationKind::CostAboveReward, format!("target {i}: c = {c} > r = {r}")));
            }
        }
        out
    }
}

/// How the protection status of a single target reaches the attacker.
#[derive(Debug, Clone, PartialEq)]
pub enum LeakageModel {
    /// Target `i` leaks with probability `p[i]`; nothing leaks with `p0`.
    Pril { p0: f64, p: Vec<f64>, support: Vec<usize> },
    /// With probability `1 - p0` the attacker observes a target of his
    /// choosing from `support`.
    Adil { p0: f64, support: Vec<usize> },
}

impl LeakageModel {
    /// No leakage at all.
    pub fn none(n: usize) -> Self {
        LeakageModel::Pril { p0: 1.0, p: alloc::vec![0.0; n], support: Vec::new() }
    }

    /// Probabilistic leakage with `p0 = 1 - sum(p)` and support `{i : p_i > 0}`.
    /// Round-off below zero in `p0` is clamped.
    pub fn pril(p: Vec<f64>) -> Self {
        let mut p0 = 1.0 - p.iter().sum::<f64>();
        if p0 < 0.0 && p0 > -PROB_TOL * (1.0 + p.len() as f64) {
            p0 = 0.0;
        }
        let support = p.iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(i, _)| i).collect();
        LeakageModel::Pril { p0, p, support }
    }

    pub fn adil(p0: f64, support: Vec<usize>) -> Self {
        LeakageModel::Adil { p0, support }
    }

    pub fn p0(&self) -> f64 {
        match self {
            LeakageModel::Pril { p0, .. } | LeakageModel::Adil { p0, .. } => *p0,
        }
    }

    pub fn support(&self) -> &[usize] {
        match self {
            LeakageModel::Pril { support, .. } | LeakageModel::Adil { support, .. } => support,
        }
    }

    pub fn is_adversarial(&self) -> bool {
        matches!(self, LeakageModel::Adil { .. })
    }

    /// Targets whose leak terms carry weight in the objective: for PRIL the
    /// support entries with `p_i > 0`, for ADIL the whole support.
    pub fn active_targets(&self) -> Vec<usize> {
        match self {
            LeakageModel::Pril { p, support, .. } => {
                support.iter().copied().filter(|&i| p.get(i).is_some_and(|&v| v > 0.0)).collect()
            }
            LeakageModel::Adil { p0, support } => {
                if *p0 >= 1.0 {
                    Vec::new()
                } else {
                    support.clone()
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    TooFewTargets,
    LengthMismatch,
    KOutOfRange,
    NonFinite,
    CostAboveReward,
    ProbabilityRange,
    Simplex,
    LeakOutsideSupport,
    SupportIndex,
    DuplicateSupport,
    EmptySupport,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::TooFewTargets => "fewer than 2 targets",
            ViolationKind::LengthMismatch => "length mismatch",
            ViolationKind::KOutOfRange => "k out of range",
            ViolationKind::NonFinite => "non-finite payoff",
            ViolationKind::CostAboveReward => "cost above reward",
            ViolationKind::ProbabilityRange => "probability out of range",
            ViolationKind::Simplex => "simplex",
            ViolationKind::LeakOutsideSupport => "leak outside support",
            ViolationKind::SupportIndex => "support index out of range",
            ViolationKind::DuplicateSupport => "duplicate support index",
            ViolationKind::EmptySupport => "empty support",
        }
    }
}

/// One failed invariant in a validation report.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, detail: String) -> Self {
        Violation { kind, detail }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.detail)
    }
}

/// Lists every violated invariant of the game and leakage model; an empty
/// report means both are valid.
pub fn validate_instance(g: &GameInstance, model: &LeakageModel) -> Vec<Violation> {
    let mut out = g.violations();
    let n = g.n();
    let p0 = model.p0();
    if !(0.0..=1.0).contains(&p0) || !p0.is_finite() {
        out.push(Violation::new(ViolationKind::ProbabilityRange, format!("p0 = {p0}")));
    }
    let support = model.support();
    let mut seen = alloc::vec![false; n];
    for &i in support {
        if i >= n {
            out.push(Violation::new(ViolationKind::SupportIndex, format!("index {i} with n = {n}")));
        } else if seen[i] {
            out.push(Violation::new(ViolationKind::DuplicateSupport, format!("index {i}")));
        } else {
            seen[i] = true;
        }
    }
    match model {
        LeakageModel::Pril { p0, p, .. } => {
            if p.len() != n {
                out.push(Violation::new(
                    ViolationKind::LengthMismatch,
                    format!("{} leak probabilities for {n} targets", p.len()),
                ));
            }
            for (i, &pi) in p.iter().enumerate() {
                if !(pi >= 0.0) || !pi.is_finite() {
                    out.push(Violation::new(ViolationKind::ProbabilityRange, format!("p[{i}] = {pi}")));
                } else if pi > 0.0 && !seen.get(i).copied().unwrap_or(false) {
                    out.push(Violation::new(ViolationKind::LeakOutsideSupport, format!("p[{i}] = {pi}")));
                }
            }
            let total = p0 + p.iter().sum::<f64>();
            if (total - 1.0).abs() > PROB_TOL * (1.0 + p.len() as f64) {
                out.push(Violation::new(ViolationKind::Simplex, format!("p0 + sum(p) = {total}")));
            }
        }
        LeakageModel::Adil { p0, support } => {
            if *p0 < 1.0 && support.is_empty() {
                out.push(Violation::new(ViolationKind::EmptySupport, format!("p0 = {p0} < 1")));
            }
        }
    }
    out
}

/// A set of exactly `k` covered targets, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureStrategy(Vec<usize>);

impl PureStrategy {
    pub fn new(mut targets: Vec<usize>, n: usize) -> Result<Self> {
        targets.sort_unstable();
        if let Some(&bad) = targets.iter().find(|&&t| t >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        if targets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("duplicate target in {targets:?}")));
        }
        Ok(PureStrategy(targets))
    }

    /// Wraps an already sorted, duplicate-free list.
    pub(crate) fn from_sorted(targets: Vec<usize>) -> Self {
        debug_assert!(targets.windows(2).all(|w| w[0] < w[1]));
        PureStrategy(targets)
    }

    pub fn targets(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, target: usize) -> bool {
        self.0.binary_search(&target).is_ok()
    }

    /// 0/1 indicator vector of length `n`.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut v = alloc::vec![false; n];
        for &t in &self.0 {
            v[t] = true;
        }
        v
    }
}

impl fmt::Display for PureStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A distribution over size-`k` pure strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    atoms: Vec<(PureStrategy, f64)>,
}

impl MixedStrategy {
    /// Validates sizes and probabilities, merging repeated pure strategies.
    pub fn new(atoms: Vec<(PureStrategy, f64)>, n: usize, k: usize) -> Result<Self> {
        let mut merged: BTreeMap<PureStrategy, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (s, p) in atoms {
            if s.len() != k {
                return Err(Error::InvalidInput(format!("pure strategy {s} has {} targets, expected {k}", s.len())));
            }
            if let Some(&bad) = s.targets().iter().find(|&&t| t >= n) {
                return Err(Error::IndexOutOfRange { index: bad, n });
            }
            if !(p > 0.0) || !p.is_finite() {
                return Err(Error::InvalidInput(format!("atom {s} has probability {p}")));
            }
            total += p;
            *merged.entry(s).or_insert(0.0) += p;
        }
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidInput(format!("probabilities sum to {total}")));
        }
        Ok(MixedStrategy { atoms: merged.into_iter().collect() })
    }

    /// Drops atoms with probability at most `floor` and rescales the rest to
    /// sum to one. Used for solver output, where tiny negative or positive
    /// round-off weights appear.
    pub fn from_weights(atoms: Vec<(PureStrategy, f64)>, n: usize, k: usize, floor: f64) -> Result<Self> {
        let kept: Vec<_> = atoms.into_iter().filter(|(_, p)| *p > floor).collect();
        let total: f64 = kept.iter().map(|(_, p)| p).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidInput(String::from("no atom with positive weight")));
        }
        let scaled = kept.into_iter().map(|(s, p)| (s, p / total)).collect();
        Self::renormalized_new(scaled, n, k)
    }

    fn renormalized_new(atoms: Vec<(PureStrategy, f64)>, n: usize, k: usize) -> Result<Self> {
        // Division by the total can leave the sum a few ulps away from 1.
        let mut ms = MixedStrategy::new(atoms, n, k)?;
        let total: f64 = ms.atoms.iter().map(|(_, p)| p).sum();
        for (_, p) in &mut ms.atoms {
            *p /= total;
        }
        Ok(ms)
    }

    /// A point-mass strategy.
    pub fn pure(s: PureStrategy) -> Self {
        MixedStrategy { atoms: alloc::vec![(s, 1.0)] }
    }

    pub fn atoms(&self) -> &[(PureStrategy, f64)] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        #[allow(unused_imports)]
        use num_traits::Float;
        -self.atoms.iter().map(|(_, p)| p * p.ln()).sum::<f64>()
    }

    pub fn probability_of(&self, s: &PureStrategy) -> f64 {
        self.atoms.iter().find(|(t, _)| t == s).map_or(0.0, |(_, p)| *p)
    }
}
