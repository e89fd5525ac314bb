//! Offline k-center solvers and brute-force oracles.
//!
//! All oracles restrict centers to data points ("discrete" centers). The
//! only continuous solver is the exact 1-D outliers routine, used to check
//! small instances against closed-form values.

mod constrained;
mod exact;
mod flow;
mod gonzalez;

pub use constrained::{
    anchored_search, assignment_satisfies, enumerate_feasible_assignment, exact_constrained, exact_constrained_with,
    feasible_assignment, minimum_enclosing_radius, AssignmentConstraint, ConstrainedSolution,
    RadiusModel,
};
pub use exact::{
    continuous_outliers_1d, exact_discrete_kcenter, exact_discrete_outliers,
    exact_outliers_with_candidates, peel_witness,
};
pub use gonzalez::{exact_oracle, fpq, gonzalez, relaxed_gonzalez};
pub(crate) use exact::outliers_cost;
pub(crate) use gonzalez::gonzalez_on;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist_to_indices, PointSet};

/// Upper bound on the number of candidate center sets an oracle enumerates.
pub const ORACLE_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KCenterSolution {
    pub center_indices: Vec<usize>,
    pub value: f64,
}

impl KCenterSolution {
    /// `max_p dist(p, centers)` recomputed from scratch.
    pub fn recompute(&self, set: &PointSet) -> f64 {
        if self.center_indices.is_empty() {
            return if set.is_empty() { 0.0 } else { f64::INFINITY };
        }
        set.iter()
            .map(|p| dist_to_indices(p, set, &self.center_indices))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutliersSolution {
    pub center_indices: Vec<usize>,
    /// Entries dropped as outliers; their multiplicities sum to at most z.
    pub outlier_indices: Vec<usize>,
    pub value: f64,
}

impl OutliersSolution {
    pub fn recompute(&self, set: &PointSet) -> f64 {
        let dropped: std::collections::HashSet<usize> = self.outlier_indices.iter().copied().collect();
        (0..set.len())
            .filter(|i| !dropped.contains(i))
            .map(|i| dist_to_indices(set.point(i), set, &self.center_indices))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

pub(crate) fn check_budget(needed: u128) -> Result<()> {
    if needed > ORACLE_BUDGET {
        return Err(Error::OracleBudgetExceeded {
            needed,
            budget: ORACLE_BUDGET,
        });
    }
    Ok(())
}

/// Calls `f` on every k-combination of `0..m` in lexicographic order.
pub(crate) fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Calls `f` on every nondecreasing k-sequence over `0..m` (k-multisets)
/// in lexicographic order.
pub(crate) fn for_each_multiset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if m == 0 || k == 0 {
        return;
    }
    let mut idx = vec![0usize; k];
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] + 1 < m {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let mut all = Vec::new();
        for_each_combination(5, 3, |c| all.push(c.to_vec()));
        assert_eq!(all.len() as u128, binomial(5, 3));
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let mut one = Vec::new();
        for_each_combination(3, 3, |c| one.push(c.to_vec()));
        assert_eq!(one, vec![vec![0, 1, 2]]);
        let mut none = 0;
        for_each_combination(2, 3, |_| none += 1);
        assert_eq!(none, 0);
    }

    #[test]
    fn multisets() {
        let mut all = Vec::new();
        for_each_multiset(3, 2, |c| all.push(c.to_vec()));
        assert_eq!(
            all,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]
        );
        let mut n = 0;
        for_each_multiset(4, 3, |_| n += 1);
        assert_eq!(n as u128, binomial(6, 3));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(512, 4), 2_829_877_120);
    }
}
