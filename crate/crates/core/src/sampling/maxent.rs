//! Max-entropy distribution over size-`k` subsets with given coverage.
//!
//! The maximizer has product form `theta_s ∝ prod_{i in s} alpha_i`. The
//! weights come from minimizing the convex dual
//! `f(t) = -sum_i t_i x_i + ln e_k(exp(t))` with `t = ln alpha`, whose
//! gradient is `xhat - x` and whose Hessian is the covariance of the
//! inclusion indicators. Targets with coverage 0 or 1 are pinned first.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::esp::{log_esp_excluding, EspTable};
use super::{check_marginals, SetDistribution};
use crate::combin::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::game::PureStrategy;
use crate::linalg::solve_dense;
use crate::marginals::PairwiseMarginals;
use crate::opt::ENUMERATION_LIMIT;

/// Largest accepted per-target coverage error.
pub const MAXENT_RESIDUAL_TOL: f64 = 1e-6;
pub const MAXENT_MAX_ITERS: usize = 10_000;

const PIN_TOL: f64 = 1e-9;
const NEWTON_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntDual {
    /// Product weights, scaled so the largest free weight is 1. Pinned-in
    /// targets carry 1 and pinned-out targets 0.
    pub alpha: Vec<f64>,
    pub log_alpha: Vec<f64>,
    pub pinned_in: Vec<usize>,
    pub pinned_out: Vec<usize>,
    /// Achieved coverage minus requested coverage, per target.
    pub residual: Vec<f64>,
    pub iterations: usize,
}

impl MaxEntDual {
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn free(&self) -> Vec<usize> {
        (0..self.n()).filter(|i| !self.pinned_in.contains(i) && !self.pinned_out.contains(i)).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residual.iter().fold(0.0, |a, r| a.max(r.abs()))
    }

    fn reduced(&self, k: usize) -> Result<(Vec<usize>, Vec<f64>, usize)> {
        let free = self.free();
        let slots = k
            .checked_sub(self.pinned_in.len())
            .filter(|&s| s <= free.len())
            .ok_or_else(|| Error::InvalidInput(format!("k = {k} is inconsistent with the pinned targets")))?;
        let la = free.iter().map(|&i| self.log_alpha[i]).collect();
        Ok((free, la, slots))
    }
}

struct Moments {
    f: f64,
    xhat: Vec<f64>,
}

fn moments(theta: &[f64], x: &[f64], k: usize) -> Moments {
    let log_z = log_esp_excluding(theta, k, &[]);
    let f = log_z - theta.iter().zip(x).map(|(t, v)| t * v).sum::<f64>();
    let xhat = (0..theta.len()).map(|i| (theta[i] + log_esp_excluding(theta, k - 1, &[i]) - log_z).exp()).collect();
    Moments { f, xhat }
}

/// Joint inclusion probabilities of the product distribution on `theta`.
fn pair_moments(theta: &[f64], k: usize) -> Vec<f64> {
    let n = theta.len();
    let log_z = log_esp_excluding(theta, k, &[]);
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        p[i * n + i] = (theta[i] + log_esp_excluding(theta, k - 1, &[i]) - log_z).exp();
        if k < 2 {
            continue;
        }
        for j in i + 1..n {
            let v = (theta[i] + theta[j] + log_esp_excluding(theta, k - 2, &[i, j]) - log_z).exp();
            p[i * n + j] = v;
            p[j * n + i] = v;
        }
    }
    p
}

/// Damped Newton on the reduced dual. Returns `(theta, iterations)`.
fn newton(x: &[f64], k: usize) -> (Vec<f64>, usize) {
    let n = x.len();
    let mut theta: Vec<f64> = x.iter().map(|&v| (v / (1.0 - v)).ln()).collect();
    let mut cur = moments(&theta, x, k);
    let mut iters = 0;
    while iters < MAXENT_MAX_ITERS {
        let g: Vec<f64> = cur.xhat.iter().zip(x).map(|(a, b)| a - b).collect();
        if g.iter().fold(0.0f64, |m, v| m.max(v.abs())) <= NEWTON_TOL {
            break;
        }
        iters += 1;
        let mut h = pair_moments(&theta, k);
        let shift = 1.0 / n as f64;
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] += shift - cur.xhat[i] * cur.xhat[j];
            }
        }
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut dir = solve_dense(&h, &neg_g).unwrap_or_else(|| neg_g.clone());
        let mut slope: f64 = g.iter().zip(&dir).map(|(a, b)| a * b).sum();
        if !(slope < 0.0) {
            dir = neg_g;
            slope = -g.iter().map(|v| v * v).sum::<f64>();
        }
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-12 {
            let trial: Vec<f64> = theta.iter().zip(&dir).map(|(a, d)| a + t * d).collect();
            let m = moments(&trial, x, k);
            if m.f <= cur.f + 1e-4 * t * slope {
                accepted = Some((trial, m));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((trial, m)) => {
                theta = trial;
                cur = m;
            }
            None => break,
        }
    }
    (theta, iters)
}

/// Solves for the product weights of the max-entropy distribution with
/// coverage `x`. Fails with [`Error::NotConverged`] if some target misses
/// its coverage by more than [`MAXENT_RESIDUAL_TOL`].
pub fn maxent_solve_dual(x: &[f64], k: usize) -> Result<MaxEntDual> {
    check_marginals(x, k)?;
    let n = x.len();
    let pinned_in: Vec<usize> = (0..n).filter(|&i| x[i] > 1.0 - PIN_TOL).collect();
    let pinned_out: Vec<usize> = (0..n).filter(|&i| x[i] < PIN_TOL).collect();
    let free: Vec<usize> = (0..n).filter(|&i| x[i] >= PIN_TOL && x[i] <= 1.0 - PIN_TOL).collect();
    let slots = k
        .checked_sub(pinned_in.len())
        .filter(|&s| s <= free.len())
        .ok_or_else(|| Error::InvalidInput(format!("{} targets are fully covered but k = {k}", pinned_in.len())))?;
    let xf: Vec<f64> = free.iter().map(|&i| x[i]).collect();
    let (theta, iterations) =
        if slots == 0 || slots == free.len() { (vec![0.0; free.len()], 0) } else { newton(&xf, slots) };
    let top = theta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut log_alpha = vec![0.0; n];
    for &i in &pinned_out {
        log_alpha[i] = f64::NEG_INFINITY;
    }
    for (a, &i) in free.iter().enumerate() {
        log_alpha[i] = theta[a] - top;
    }
    let alpha = log_alpha.iter().map(|v| v.exp()).collect();
    let mut dual = MaxEntDual { alpha, log_alpha, pinned_in, pinned_out, residual: Vec::new(), iterations };
    let achieved = maxent_pair_marginals(&dual, k)?.diagonal();
    dual.residual = achieved.iter().zip(x).map(|(a, b)| a - b).collect();
    let worst = dual.max_residual();
    if !(worst <= MAXENT_RESIDUAL_TOL) {
        return Err(Error::NotConverged(format!(
            "max-entropy coverage residual {worst:e} after {iterations} iterations"
        )));
    }
    Ok(dual)
}

fn with_pinned(dual: &MaxEntDual, free: &[usize], picks: impl Iterator<Item = usize>) -> PureStrategy {
    let mut s: Vec<usize> = dual.pinned_in.iter().copied().chain(picks.map(|a| free[a])).collect();
    s.sort_unstable();
    PureStrategy::from_sorted(s)
}

/// Draws one pure strategy by walking the free targets from last to first,
/// including target `j` with probability `alpha_j T(i-1, j-1) / T(i, j)`
/// while `i` slots remain.
pub fn maxent_sample<R: Rng + ?Sized>(dual: &MaxEntDual, k: usize, rng: &mut R) -> Result<PureStrategy> {
    let (free, la, slots) = dual.reduced(k)?;
    let table = EspTable::from_log_weights(&la, slots);
    let mut picks = Vec::with_capacity(slots);
    let mut i = slots;
    let mut j = la.len();
    while i > 0 {
        let take = if i == j {
            true
        } else {
            let p = (la[j - 1] + table.log_value(i - 1, j - 1) - table.log_value(i, j)).exp();
            rng.random::<f64>() < p
        };
        if take {
            picks.push(j - 1);
            i -= 1;
        }
        j -= 1;
    }
    debug_assert_eq!(picks.len(), slots);
    Ok(with_pinned(dual, &free, picks.into_iter()))
}

/// Exact pairwise marginals of the product distribution, including pinned
/// targets.
pub fn maxent_pair_marginals(dual: &MaxEntDual, k: usize) -> Result<PairwiseMarginals> {
    let n = dual.n();
    let (free, la, slots) = dual.reduced(k)?;
    let nf = free.len();
    let inner = if slots == 0 { vec![0.0; nf * nf] } else { pair_moments(&la, slots) };
    let mut x = PairwiseMarginals::zeros(n);
    for &i in &dual.pinned_in {
        for &j in &dual.pinned_in {
            x.set(i, j, 1.0);
        }
        for (a, &j) in free.iter().enumerate() {
            let v = inner[a * nf + a];
            x.set(i, j, v);
            x.set(j, i, v);
        }
    }
    for (a, &i) in free.iter().enumerate() {
        for (b, &j) in free.iter().enumerate() {
            x.set(i, j, inner[a * nf + b]);
        }
    }
    Ok(x)
}

fn guard(nf: usize, slots: usize) -> Result<()> {
    let count = binomial(nf, slots);
    if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("C({nf}, {slots}) = {count} exceeds {ENUMERATION_LIMIT}")));
    }
    Ok(())
}

/// `theta_s = alpha_s / T(k, n)` for every subset.
pub fn maxent_distribution(dual: &MaxEntDual, k: usize) -> Result<SetDistribution> {
    let (free, la, slots) = dual.reduced(k)?;
    guard(free.len(), slots)?;
    let log_z = log_esp_excluding(&la, slots, &[]);
    let entries = Combinations::new(la.len(), slots).map(|c| {
        let lp: f64 = c.iter().map(|&a| la[a]).sum::<f64>() - log_z;
        (with_pinned(dual, &free, c.into_iter()), lp.exp())
    });
    Ok(SetDistribution::from_entries(dual.n(), k, entries.collect::<Vec<_>>()))
}

/// Distribution of [`maxent_sample`] obtained by following every path of
/// its inclusion decisions.
pub fn maxent_path_distribution(dual: &MaxEntDual, k: usize) -> Result<SetDistribution> {
    let (free, la, slots) = dual.reduced(k)?;
    guard(free.len(), slots)?;
    let table = EspTable::from_log_weights(&la, slots);
    let mut entries = Vec::new();
    let mut picks = Vec::new();
    walk(&la, &table, slots, la.len(), 1.0, &mut picks, &mut |picks, p| {
        entries.push((with_pinned(dual, &free, picks.iter().copied()), p));
    });
    Ok(SetDistribution::from_entries(dual.n(), k, entries))
}

fn walk(
    la: &[f64],
    table: &EspTable,
    i: usize,
    j: usize,
    prob: f64,
    picks: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize], f64),
) {
    if i == 0 {
        emit(picks, prob);
        return;
    }
    let p = if i == j { 1.0 } else { (la[j - 1] + table.log_value(i - 1, j - 1) - table.log_value(i, j)).exp() };
    picks.push(j - 1);
    walk(la, table, i - 1, j - 1, prob * p, picks, emit);
    picks.pop();
    if p < 1.0 {
        walk(la, table, i, j - 1, prob * (1.0 - p), picks, emit);
    }
}
