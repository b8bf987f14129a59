use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::GameInstance;
use crate::linprog::{solve_lp, LinearProgram, Sense};

/// Optimal no-leakage coverage `x` and its utility `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalSolution {
    pub coverage: Vec<f64>,
    pub utility: f64,
}

/// Solves `max u s.t. u <= r_i x_i + c_i (1 - x_i), sum x <= k, 0 <= x <= 1`.
///
/// Any slack in the resource constraint is spent afterwards on the
/// lowest-index targets with `x_i < 1`, so the returned coverage always sums
/// to exactly `k`. Extra coverage never lowers the utility because
/// `c_i <= r_i`.
pub fn solve_marginal_lp(g: &GameInstance) -> Result<MarginalSolution> {
    let n = g.n();
    let k = g.k;
    // variables: x_0..x_{n-1}, u
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    let mut lp = LinearProgram::new(obj);
    for i in 0..n {
        lp.set_bounds(i, 0.0, 1.0);
    }
    lp.set_bounds(n, f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..n {
        // u - (r_i - c_i) x_i <= c_i
        let mut row = vec![0.0; n + 1];
        row[i] = -(g.rewards[i] - g.costs[i]);
        row[n] = 1.0;
        lp.add_row(row, Sense::Le, g.costs[i]);
    }
    let mut row = vec![1.0; n + 1];
    row[n] = 0.0;
    lp.add_row(row, Sense::Le, k as f64);
    let sol = solve_lp(&lp)?;
    if !sol.is_optimal() {
        return Err(Error::Lp(alloc::format!("marginal LP ended with status {:?}", sol.status)));
    }
    let mut x: Vec<f64> = sol.x[..n].iter().map(|v| v.clamp(0.0, 1.0)).collect();
    pad_to_k(&mut x, k);
    let utility = coverage_utility(g, &x);
    Ok(MarginalSolution { coverage: x, utility })
}

/// `min_i r_i x_i + c_i (1 - x_i)`.
pub(crate) fn coverage_utility(g: &GameInstance, x: &[f64]) -> f64 {
    (0..g.n()).map(|i| g.rewards[i] * x[i] + g.costs[i] * (1.0 - x[i])).fold(f64::INFINITY, f64::min)
}

fn pad_to_k(x: &mut [f64], k: usize) {
    let kf = k as f64;
    let mut slack = kf - x.iter().sum::<f64>();
    for xi in x.iter_mut() {
        if slack <= 0.0 {
            break;
        }
        let add = (1.0 - *xi).min(slack);
        *xi += add;
        slack -= add;
    }
    // Remove round-off excess from the largest entries below 1 last.
    let excess = x.iter().sum::<f64>() - kf;
    if excess.abs() > 0.0 {
        if let Some(j) = (0..x.len()).filter(|&j| x[j] - excess >= 0.0 && x[j] - excess <= 1.0).max_by(|&a, &b| {
            let fa = x[a].min(1.0 - x[a]);
            let fb = x[b].min(1.0 - x[b]);
            fa.total_cmp(&fb)
        }) {
            x[j] -= excess;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_target_example() {
        let g = GameInstance::new(2, vec![1.0, 1.0, 2.0, 2.0], vec![-2.0, -2.0, -1.0, -1.0]).unwrap();
        let m = solve_marginal_lp(&g).unwrap();
        let expected = [2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        for (a, b) in m.coverage.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{:?}", m.coverage);
        }
        assert!(m.utility.abs() < 1e-12);
    }

    #[test]
    fn full_coverage() {
        let g = GameInstance::new(3, vec![4.0, 1.5, 2.0], vec![-1.0, -3.0, 0.0]).unwrap();
        let m = solve_marginal_lp(&g).unwrap();
        assert_eq!(m.coverage, vec![1.0; 3]);
        assert_eq!(m.utility, 1.5);
    }

    #[test]
    fn symmetric_pair() {
        let g = GameInstance::new(1, vec![1.0, 1.0], vec![-1.0, -1.0]).unwrap();
        let m = solve_marginal_lp(&g).unwrap();
        assert!((m.coverage[0] - 0.5).abs() < 1e-12 && (m.coverage[1] - 0.5).abs() < 1e-12);
        assert!(m.utility.abs() < 1e-12);
    }

    #[test]
    fn slack_is_padded_on_lowest_indices() {
        // Target 2 is worthless to attack; LP1 leaves resources unused.
        let g = GameInstance::new(2, vec![5.0, 5.0, 5.0], vec![5.0, 0.0, 5.0]).unwrap();
        let m = solve_marginal_lp(&g).unwrap();
        assert!((m.coverage.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert!((m.coverage[1] - 1.0).abs() < 1e-12);
        assert!((m.utility - 5.0).abs() < 1e-12);
    }
}
