//! Exact membership test for the polytope of pairwise marginals of size-`k`
//! strategies, by a feasibility LP over all `C(n, k)` vertices `s s^T`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::combin::Combinations;
use crate::error::{Error, Result};
use crate::linprog::{solve_lp, LinearProgram, LpStatus, Sense};
use crate::marginals::PairwiseMarginals;

/// Largest `n` accepted by [`membership_check_small`].
pub const MEMBERSHIP_MAX_N: usize = 12;

/// True iff `x` is a convex combination of `s s^T` over size-`k` subsets.
///
/// The matrix is symmetrized before the test; only the upper triangle enters
/// the LP.
pub fn membership_check_small(x: &PairwiseMarginals, k: usize) -> Result<bool> {
    let n = x.n();
    if n > MEMBERSHIP_MAX_N {
        return Err(Error::TooLarge(format!("membership test needs n <= {MEMBERSHIP_MAX_N}, got {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("k = {k} is out of range for n = {n}")));
    }
    let vertices: Vec<Vec<usize>> = Combinations::new(n, k).collect();
    let nv = vertices.len();
    let mut lp = LinearProgram::new(vec![0.0; nv]);
    for i in 0..n {
        for j in i..n {
            let row = vertices.iter().map(|s| if s.contains(&i) && s.contains(&j) { 1.0 } else { 0.0 }).collect();
            lp.add_row(row, Sense::Eq, 0.5 * (x.get(i, j) + x.get(j, i)));
        }
    }
    lp.add_row(vec![1.0; nv], Sense::Eq, 1.0);
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(true),
        LpStatus::Infeasible => Ok(false),
        other => Err(Error::Lp(format!("membership LP ended with status {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_outside_for_wrong_trace() {
        let mut d = vec![0.0; 9];
        for i in 0..3 {
            d[i * 3 + i] = 1.0;
        }
        let x = PairwiseMarginals::from_row_major(3, d).unwrap();
        assert!(!membership_check_small(&x, 2).unwrap());
    }

    #[test]
    fn uniform_pairs_are_inside() {
        // uniform over the 6 pairs of 4 targets
        let mut d = vec![1.0 / 6.0; 16];
        for i in 0..4 {
            d[i * 4 + i] = 0.5;
        }
        let x = PairwiseMarginals::from_row_major(4, d).unwrap();
        assert!(membership_check_small(&x, 2).unwrap());
    }

    #[test]
    fn psd_matrix_with_right_trace_and_sum_can_be_outside() {
        // J/6 + diag(13/30, 7/30, 1/3, 1/3): PSD, trace 2, sum 4, but the
        // diagonal differs from the off-diagonal row sums.
        let mut d = vec![1.0 / 6.0; 16];
        for (i, v) in [0.6, 0.4, 0.5, 0.5].into_iter().enumerate() {
            d[i * 4 + i] = v;
        }
        let x = PairwiseMarginals::from_row_major(4, d).unwrap();
        assert!(x.min_eigenvalue() > 0.0);
        assert!((x.trace() - 2.0).abs() < 1e-12 && (x.entry_sum() - 4.0).abs() < 1e-12);
        assert!(!membership_check_small(&x, 2).unwrap());
    }

    #[test]
    fn size_guard() {
        let x = PairwiseMarginals::zeros(13);
        assert!(membership_check_small(&x, 2).unwrap_err().is_size_guard());
    }
}
