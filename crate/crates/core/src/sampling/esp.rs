//! Weighted elementary symmetric polynomials.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::log_add_exp;

/// `T(i, j)`: sum over size-`i` subsets of the first `j` weights of the
/// product of their weights, stored as logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct EspTable {
    k: usize,
    n: usize,
    log_t: Vec<f64>,
}

impl EspTable {
    /// Builds the table from log-weights `ln alpha_j`.
    pub fn from_log_weights(log_alpha: &[f64], k: usize) -> Self {
        let n = log_alpha.len();
        let mut log_t = vec![f64::NEG_INFINITY; (k + 1) * (n + 1)];
        for j in 0..=n {
            log_t[j] = 0.0;
        }
        for i in 1..=k {
            for j in 1..=n {
                let skip = log_t[i * (n + 1) + j - 1];
                let take = log_alpha[j - 1] + log_t[(i - 1) * (n + 1) + j - 1];
                log_t[i * (n + 1) + j] = log_add_exp(skip, take);
            }
        }
        EspTable { k, n, log_t }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_value(&self, i: usize, j: usize) -> f64 {
        self.log_t[i * (self.n + 1) + j]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.log_value(i, j).exp()
    }

    /// `ln T(k, n)`, the log partition function.
    pub fn log_total(&self) -> f64 {
        self.log_value(self.k, self.n)
    }
}

/// Table for positive weights `alpha`.
pub fn esp_table(alpha: &[f64], k: usize) -> Result<EspTable> {
    if let Some((i, a)) = alpha.iter().enumerate().find(|(_, a)| !(**a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidInput(format!("weight {i} is {a}, expected a positive number")));
    }
    if k > alpha.len() {
        return Err(Error::InvalidInput(format!("k = {k} exceeds n = {}", alpha.len())));
    }
    let la: Vec<f64> = alpha.iter().map(|a| a.ln()).collect();
    Ok(EspTable::from_log_weights(&la, k))
}

/// `ln e_r` of the weights not listed in `excluded`.
pub(crate) fn log_esp_excluding(log_alpha: &[f64], r: usize, excluded: &[usize]) -> f64 {
    let mut dp = vec![f64::NEG_INFINITY; r + 1];
    dp[0] = 0.0;
    for (j, &la) in log_alpha.iter().enumerate() {
        if excluded.contains(&j) {
            continue;
        }
        for i in (1..=r).rev() {
            dp[i] = log_add_exp(dp[i], la + dp[i - 1]);
        }
    }
    dp[r]
}
