//! Pure-strategy samplers that reproduce a given coverage vector.
//!
//! All samplers take an explicit random generator. Where the induced
//! distribution is tractable an exact form is provided as well, either as a
//! [`SetDistribution`] or directly as pairwise marginals.

mod comb;
mod dist;
mod esp;
mod indep;
mod maxent;

pub use comb::{
    comb_layout, comb_layout_ordered, comb_pair_marginals, comb_sample, comb_support, unics_distribution_exact,
    uniform_comb_sample, BucketLayout, UNICS_EXACT_MAX_N,
};
pub use dist::SetDistribution;
pub use esp::{esp_table, EspTable};
pub use indep::{exact_indep_distribution, indep_sample_without_replacement, INDEP_EXACT_MAX_K, INDEP_EXACT_MAX_N};
pub use maxent::{
    maxent_distribution, maxent_pair_marginals, maxent_path_distribution, maxent_sample, maxent_solve_dual, MaxEntDual,
    MAXENT_MAX_ITERS, MAXENT_RESIDUAL_TOL,
};

use alloc::format;

use crate::error::{Error, Result};

/// Tolerance on `sum_i x_i = k` and on the box `[0, 1]`.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Checks `0 <= x_i <= 1` and `sum x_i = k` up to [`MARGINAL_TOL`].
pub(crate) fn check_marginals(x: &[f64], k: usize) -> Result<()> {
    if k == 0 || k > x.len() {
        return Err(Error::InvalidInput(format!("k = {k} is out of range for n = {}", x.len())));
    }
    if let Some((i, v)) =
        x.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < -MARGINAL_TOL || **v > 1.0 + MARGINAL_TOL)
    {
        return Err(Error::InvalidInput(format!("coverage of target {i} is {v}")));
    }
    let sum: f64 = x.iter().sum();
    if (sum - k as f64).abs() > MARGINAL_TOL {
        return Err(Error::MarginalSum { sum, k });
    }
    Ok(())
}
