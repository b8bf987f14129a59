//! Pairwise coverage matrices and exact defender utilities under leakage.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{GameInstance, LeakageModel, MixedStrategy};
use crate::linalg::symmetric_eigenvalues;

/// Tolerance for the PSD, trace and entry-sum checks.
pub const POLYTOPE_TOL: f64 = 1e-9;

/// Symmetric matrix of joint coverage probabilities; entry `(i, j)` is
/// `Pr(i and j covered)` and the diagonal holds single-target coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMarginals {
    n: usize,
    data: Vec<f64>,
}

impl PairwiseMarginals {
    /// Wraps a row-major `n x n` matrix. Only the shape is checked.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(PairwiseMarginals { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        PairwiseMarginals { n, data: vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub(crate) fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn entry_sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Smallest eigenvalue of the symmetrized matrix `(X + X^T) / 2`.
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.n;
        let mut sym = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                sym[i * n + j] = 0.5 * (self.get(i, j) + self.get(j, i));
            }
        }
        symmetric_eigenvalues(&sym, n).first().copied().unwrap_or(0.0)
    }

    /// Convex combination `(1 - t) self + t other`.
    pub fn mix(&self, other: &PairwiseMarginals, t: f64) -> PairwiseMarginals {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (1.0 - t) * a + t * b).collect();
        PairwiseMarginals { n: self.n, data }
    }

    /// Checks the necessary conditions for membership in the pairwise
    /// marginal polytope of size-`k` strategies: box and Frechet bounds,
    /// symmetry, positive semi-definiteness, `trace = k` and `sum = k^2`.
    /// Returns the list of failed checks.
    pub fn polytope_violations(&self, k: usize, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let x = self.get(i, j);
                if (x - self.get(j, i)).abs() > tol {
                    out.push(format!("asymmetric at ({i},{j})"));
                }
                if x < -tol || x > self.get(i, i).min(self.get(j, j)) + tol {
                    out.push(format!("box bound at ({i},{j}): {x}"));
                }
                if x < self.get(i, i) + self.get(j, j) - 1.0 - tol {
                    out.push(format!("lower Frechet bound at ({i},{j}): {x}"));
                }
            }
        }
        let kf = k as f64;
        if (self.trace() - kf).abs() > tol {
            out.push(format!("trace {} != {k}", self.trace()));
        }
        if (self.entry_sum() - kf * kf).abs() > tol {
            out.push(format!("entry sum {} != {}", self.entry_sum(), kf * kf));
        }
        let lambda = self.min_eigenvalue();
        if lambda < -tol {
            out.push(format!("not PSD: min eigenvalue {lambda}"));
        }
        out
    }
}

/// `x_ij = sum of theta_s over atoms containing both i and j`.
pub fn pairwise_marginals(ms: &MixedStrategy, n: usize) -> Result<PairwiseMarginals> {
    let mut x = PairwiseMarginals::zeros(n);
    for (s, p) in ms.atoms() {
        let t = s.targets();
        if let Some(&bad) = t.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        for &i in t {
            for &j in t {
                x.add(i, j, *p);
            }
        }
    }
    Ok(x)
}

/// Defender utilities conditioned on what the attacker observes.
///
/// `u` is the no-leakage utility. For each target `i`, `u_vec[i]` is the
/// utility mass on the event "i observed covered" and `v_vec[i]` on "i
/// observed uncovered", so `u_vec[i] + v_vec[i]` is the utility when `i`
/// leaks. `w` is the minimum of `u_i + v_i` over the support.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalUtilities {
    pub u: f64,
    pub u_vec: Vec<f64>,
    pub v_vec: Vec<f64>,
    pub w: f64,
    /// Attacked target without leakage (lowest index among ties).
    pub attack: usize,
    pub attack_if_covered: Vec<usize>,
    pub attack_if_uncovered: Vec<usize>,
}

fn argmin(values: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, v) in values.enumerate() {
        if v < best.1 {
            best = (j, v);
        }
    }
    best
}

/// Evaluates `u`, `u_i`, `v_i` for every target and `w` over `support`.
/// An empty support gives `w = u`.
pub fn conditional_utilities(x: &PairwiseMarginals, g: &GameInstance, support: &[usize]) -> ConditionalUtilities {
    let n = g.n();
    let (r, c) = (&g.rewards, &g.costs);
    let (attack, u) = argmin((0..n).map(|j| {
        let xjj = x.get(j, j);
        r[j] * xjj + c[j] * (1.0 - xjj)
    }));
    let mut u_vec = Vec::with_capacity(n);
    let mut v_vec = Vec::with_capacity(n);
    let mut attack_if_covered = Vec::with_capacity(n);
    let mut attack_if_uncovered = Vec::with_capacity(n);
    for i in 0..n {
        let xii = x.get(i, i);
        let (ja, ui) = argmin((0..n).map(|j| {
            let xij = x.get(i, j);
            r[j] * xij + c[j] * (xii - xij)
        }));
        let (jb, vi) = argmin((0..n).map(|j| {
            let xij = x.get(i, j);
            let xjj = x.get(j, j);
            r[j] * (xjj - xij) + c[j] * (1.0 - xii - xjj + xij)
        }));
        u_vec.push(ui);
        v_vec.push(vi);
        attack_if_covered.push(ja);
        attack_if_uncovered.push(jb);
    }
    let w = support.iter().map(|&i| u_vec[i] + v_vec[i]).fold(f64::INFINITY, f64::min);
    let w = if support.is_empty() { u } else { w };
    ConditionalUtilities { u, u_vec, v_vec, w, attack, attack_if_covered, attack_if_uncovered }
}

/// Expected defender utility of coverage matrix `x` under `model`.
///
/// PRIL: `p0 u + sum_i p_i (u_i + v_i)`; ADIL: `p0 u + (1 - p0) w`.
pub fn leakage_utility(x: &PairwiseMarginals, g: &GameInstance, model: &LeakageModel) -> f64 {
    match model {
        LeakageModel::Pril { p0, p, support } => {
            let cu = conditional_utilities(x, g, support);
            let leaked: f64 = p
                .iter()
                .enumerate()
                .filter(|(_, &pi)| pi != 0.0)
                .map(|(i, &pi)| pi * (cu.u_vec[i] + cu.v_vec[i]))
                .sum();
            p0 * cu.u + leaked
        }
        LeakageModel::Adil { p0, support } => {
            let cu = conditional_utilities(x, g, support);
            if *p0 >= 1.0 {
                cu.u
            } else {
                p0 * cu.u + (1.0 - p0) * cu.w
            }
        }
    }
}
