//! Defender oracles: maximize `s^T A s` over size-`k` target subsets.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::combin::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::game::PureStrategy;

use super::master::MasterDuals;

/// Largest `C(n, k)` any enumeration in this crate will attempt.
pub const ENUMERATION_LIMIT: u128 = 200_000;
/// Largest leakage support handled by the support-enumeration oracle.
pub const ALG1_MAX_SUPPORT: usize = 25;

/// Symmetric `n x n` matrix whose off-diagonal entries vanish whenever both
/// indices lie outside `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMatrix {
    n: usize,
    data: Vec<f64>,
    support: Vec<usize>,
}

impl OracleMatrix {
    pub fn new(n: usize, data: Vec<f64>, support: Vec<usize>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!("expected {} entries, got {}", n * n, data.len())));
        }
        let mut support = support;
        support.sort_unstable();
        support.dedup();
        if let Some(&i) = support.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let mut inside = vec![false; n];
        for &i in &support {
            inside[i] = true;
        }
        for i in 0..n {
            for j in 0..n {
                let a = data[i * n + j];
                if !a.is_finite() {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) is not finite")));
                }
                if a != data[j * n + i] {
                    return Err(Error::Structure(format!("matrix is not symmetric at ({i}, {j})")));
                }
                if i != j && a != 0.0 && !inside[i] && !inside[j] {
                    return Err(Error::Structure(format!(
                        "entry ({i}, {j}) is non-zero but both targets are outside the support"
                    )));
                }
            }
        }
        Ok(OracleMatrix { n, data, support })
    }

    /// A symmetric matrix with every target in the support.
    pub fn dense(n: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(n, data, (0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }
}

/// `A = (M + M^T) / 2` where `M` keeps the priced entries of `duals.beta` in
/// rows of `support` and on the diagonal.
pub fn build_oracle_matrix(duals: &MasterDuals, n: usize, support: &[usize]) -> Result<OracleMatrix> {
    if duals.n != n || duals.beta.len() != n * n {
        return Err(Error::Dimension(format!("duals are for {} targets, expected {n}", duals.n)));
    }
    let mut tracked = vec![false; n];
    for &i in support {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        tracked[i] = true;
    }
    let m = |i: usize, j: usize| {
        if i == j || tracked[i] {
            duals.beta[i * n + j]
        } else {
            0.0
        }
    };
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = (m(i, j) + m(j, i)) / 2.0;
        }
    }
    OracleMatrix::new(n, data, support.to_vec())
}

/// `s^T A s` summed in a fixed order over the sorted targets of `s`.
pub fn quadratic_value(a: &OracleMatrix, s: &[usize]) -> f64 {
    let mut acc = 0.0;
    for &i in s {
        for &j in s {
            acc += a.get(i, j);
        }
    }
    acc
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("k = {k} is out of range for n = {n}")));
    }
    Ok(())
}

fn better(value: f64, s: &[usize], best: &Option<(Vec<usize>, f64)>) -> bool {
    match best {
        None => true,
        Some((bs, bv)) => value > *bv || (value == *bv && s < bs.as_slice()),
    }
}

/// Support-enumeration oracle.
///
/// For every `C` inside the support with `|C| <= k`, the remaining `k - |C|`
/// targets are the non-support targets with the largest
/// `2 * sum_{i in C} A[i, j] + A[j, j]`. Runs in `O(2^m * n * (m + log n))`.
pub fn defender_oracle_alg1(a: &OracleMatrix, k: usize) -> Result<(PureStrategy, f64)> {
    let n = a.n;
    check_k(n, k)?;
    let sup = &a.support;
    let m = sup.len();
    if m > ALG1_MAX_SUPPORT {
        return Err(Error::TooLarge(format!("support of size {m} exceeds {ALG1_MAX_SUPPORT}")));
    }
    let mut in_sup = vec![false; n];
    for &i in sup {
        in_sup[i] = true;
    }
    let outside: Vec<usize> = (0..n).filter(|&j| !in_sup[j]).collect();
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut chosen = Vec::with_capacity(m);
    let mut scores: Vec<(f64, usize)> = Vec::with_capacity(outside.len());
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size > k || k - size > outside.len() {
            continue;
        }
        chosen.clear();
        chosen.extend((0..m).filter(|&b| mask & (1 << b) != 0).map(|b| sup[b]));
        scores.clear();
        for &j in &outside {
            let mut v = a.get(j, j);
            for &i in &chosen {
                v += 2.0 * a.get(i, j);
            }
            scores.push((v, j));
        }
        scores.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut s: Vec<usize> = chosen.clone();
        s.extend(scores[..k - size].iter().map(|&(_, j)| j));
        s.sort_unstable();
        let value = quadratic_value(a, &s);
        if better(value, &s, &best) {
            best = Some((s, value));
        }
    }
    let (s, value) =
        best.ok_or_else(|| Error::InvalidInput(format!("no subset of size {k} fits the support structure")))?;
    Ok((PureStrategy::from_sorted(s), value))
}

/// Exhaustive oracle over all `C(n, k)` subsets in lexicographic order.
pub fn defender_oracle_bruteforce(a: &OracleMatrix, k: usize) -> Result<(PureStrategy, f64)> {
    let n = a.n;
    check_k(n, k)?;
    let count = binomial(n, k);
    if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("C({n}, {k}) = {count} exceeds {ENUMERATION_LIMIT}")));
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for s in Combinations::new(n, k) {
        let value = quadratic_value(a, &s);
        if best.as_ref().is_none_or(|(_, bv)| value > *bv) {
            best = Some((s, value));
        }
    }
    let (s, value) = best.expect("at least one subset");
    Ok((PureStrategy::from_sorted(s), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_example() -> OracleMatrix {
        OracleMatrix::new(3, vec![1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 3.0], vec![0]).unwrap()
    }

    #[test]
    fn diagonal_matrix_picks_largest_entries() {
        let mut d = vec![0.0; 16];
        for (i, v) in [3.0, 2.0, 1.0, 0.0].into_iter().enumerate() {
            d[i * 4 + i] = v;
        }
        let a = OracleMatrix::new(4, d, vec![]).unwrap();
        let (s, v) = defender_oracle_alg1(&a, 2).unwrap();
        assert_eq!(s.targets(), &[0, 1]);
        assert_eq!(v, 5.0);
    }

    #[test]
    fn one_support_target_example() {
        let a = small_example();
        let (s, v) = defender_oracle_alg1(&a, 2).unwrap();
        assert_eq!((s.targets(), v), (&[0usize, 1][..], 6.0));
        let (s, v) = defender_oracle_bruteforce(&a, 2).unwrap();
        assert_eq!((s.targets(), v), (&[0usize, 1][..], 6.0));
    }

    #[test]
    fn brute_force_ties_go_to_first_subset() {
        let a = OracleMatrix::dense(5, vec![0.0; 25]).unwrap();
        let (s, v) = defender_oracle_bruteforce(&a, 3).unwrap();
        assert_eq!((s.targets(), v), (&[0usize, 1, 2][..], 0.0));
        let a = OracleMatrix::dense(5, vec![1.0; 25]).unwrap();
        let (s, v) = defender_oracle_bruteforce(&a, 3).unwrap();
        assert_eq!((s.targets(), v), (&[0usize, 1, 2][..], 9.0));
    }

    #[test]
    fn structure_is_enforced() {
        let d = vec![0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert!(OracleMatrix::new(3, d.clone(), vec![2]).is_err());
        assert!(OracleMatrix::new(3, d, vec![1]).is_ok());
        let asym = vec![0.0, 1.0, 2.0, 0.0];
        assert!(OracleMatrix::dense(2, asym).is_err());
    }

    #[test]
    fn matches_brute_force_on_integer_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.random_range(2..=10);
            let m = rng.random_range(0..=n.min(4));
            let k = rng.random_range(1..=n.min(5));
            let mut support: Vec<usize> = (0..n).collect();
            for i in 0..m {
                let j = rng.random_range(i..n);
                support.swap(i, j);
            }
            support.truncate(m);
            let mut d = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    if i == j || support.contains(&i) || support.contains(&j) {
                        let v = rng.random_range(-5i32..=5) as f64;
                        d[i * n + j] = v;
                        d[j * n + i] = v;
                    }
                }
            }
            let a = OracleMatrix::new(n, d, support).unwrap();
            let (s1, v1) = defender_oracle_alg1(&a, k).unwrap();
            let (_, v2) = defender_oracle_bruteforce(&a, k).unwrap();
            assert_eq!(v1, v2);
            assert_eq!(quadratic_value(&a, s1.targets()), v1);
        }
    }

    #[test]
    fn oracle_matrix_from_single_diagonal_dual() {
        let mut beta = vec![0.0; 9];
        beta[0] = 1.0;
        let duals = MasterDuals { n: 3, beta, omega: 0.0, rho: vec![] };
        let a = build_oracle_matrix(&duals, 3, &[]).unwrap();
        let mut e = vec![0.0; 9];
        e[0] = 1.0;
        assert_eq!(a.as_row_major(), &e[..]);
    }
}
