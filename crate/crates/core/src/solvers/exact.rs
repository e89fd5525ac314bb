use super::{
    binomial, check_budget, for_each_combination, gonzalez_on, KCenterSolution, OutliersSolution,
};
use crate::error::{Error, Result};
use crate::geometry::{dist, PointSet};

fn distance_matrix(set: &PointSet, idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| dist(set.point(i), set.point(j))).collect())
        .collect()
}

/// Brute-force discrete k-center: the k-subset of distinct locations
/// minimising the covering radius. The lexicographically smallest optimum
/// (by first-occurrence index) wins ties.
pub fn exact_discrete_kcenter(set: &PointSet, k: usize) -> Result<KCenterSolution> {
    if set.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    let distinct = set.distinct_indices();
    let m = distinct.len();
    if k >= m {
        return Ok(KCenterSolution {
            center_indices: distinct,
            value: 0.0,
        });
    }
    check_budget(binomial(m, k))?;
    let dm = distance_matrix(set, &distinct);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_combination(m, k, |c| {
        let mut radius: f64 = 0.0;
        for row in &dm {
            let d = c.iter().map(|&j| row[j]).fold(f64::INFINITY, f64::min);
            radius = radius.max(d);
            if let Some((b, _)) = &best {
                if radius >= *b {
                    return;
                }
            }
        }
        best = Some((radius, c.to_vec()));
    });
    let (value, c) = best.expect("at least one combination");
    Ok(KCenterSolution {
        center_indices: c.iter().map(|&j| distinct[j]).collect(),
        value,
    })
}

/// For fixed centers, drop the `z` farthest weight units. Returns the
/// resulting value and the entries dropped in full.
fn drop_farthest(dists: &[f64], weights: &[u64], z: u64) -> (f64, Vec<usize>) {
    let mut order: Vec<usize> = (0..dists.len()).collect();
    order.sort_by(|&a, &b| dists[b].total_cmp(&dists[a]).then(a.cmp(&b)));
    let mut budget = z;
    let mut dropped = Vec::new();
    for &i in &order {
        if weights[i] <= budget {
            budget -= weights[i];
            dropped.push(i);
        } else {
            return (dists[i], dropped);
        }
    }
    (0.0, dropped)
}

/// Value of fixed centers with the `z` farthest weight units dropped.
pub(crate) fn outliers_cost(set: &PointSet, centers: &[usize], z: u64) -> f64 {
    let dists: Vec<f64> = set
        .iter()
        .map(|p| centers.iter().map(|&c| dist(p, set.point(c))).fold(f64::INFINITY, f64::min))
        .collect();
    drop_farthest(&dists, set.multiplicities(), z).0
}

/// Brute-force discrete k-center with `z` outliers. Multiplicities count
/// toward `z`. For each candidate center set the `z` farthest weight units
/// are dropped, which is optimal for fixed centers.
pub fn exact_discrete_outliers(set: &PointSet, k: usize, z: u64) -> Result<OutliersSolution> {
    exact_outliers_with_candidates(set, set, k, z)
}

/// As [`exact_discrete_outliers`], but centers range over the distinct
/// locations of `candidates` instead of `set`. `center_indices` index into
/// `candidates`; `outlier_indices` index into `set`.
pub fn exact_outliers_with_candidates(
    set: &PointSet,
    candidates: &PointSet,
    k: usize,
    z: u64,
) -> Result<OutliersSolution> {
    if set.is_empty() || candidates.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    candidates.check_dim(set.dim())?;
    let distinct = candidates.distinct_indices();
    let m = distinct.len();
    if z >= set.total_weight() {
        return Ok(OutliersSolution {
            center_indices: distinct[..k.min(m)].to_vec(),
            outlier_indices: (0..set.len()).collect(),
            value: 0.0,
        });
    }
    let kk = k.min(m);
    check_budget(binomial(m, kk))?;
    let weights = set.multiplicities();
    let table: Vec<Vec<f64>> = set
        .iter()
        .map(|p| distinct.iter().map(|&j| dist(p, candidates.point(j))).collect())
        .collect();
    let mut dists = vec![0.0; set.len()];
    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_combination(m, kk, |c| {
        for (i, row) in table.iter().enumerate() {
            dists[i] = c.iter().map(|&j| row[j]).fold(f64::INFINITY, f64::min);
        }
        let (v, _) = drop_farthest(&dists, weights, z);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, c.to_vec()));
        }
    });
    let (value, c) = best.expect("at least one combination");
    for (i, row) in table.iter().enumerate() {
        dists[i] = c.iter().map(|&j| row[j]).fold(f64::INFINITY, f64::min);
    }
    let (_, mut outliers) = drop_farthest(&dists, weights, z);
    outliers.sort_unstable();
    Ok(OutliersSolution {
        center_indices: c.iter().map(|&j| distinct[j]).collect(),
        outlier_indices: outliers,
        value,
    })
}

/// Outlier witness by peeling: run Gonzalez for `k+1` picks `z+1` times,
/// removing each round's picks before the next. Works on merged distinct
/// locations (multiplicities summed, colors dropped), so the witness has
/// exactly `(k+1)(z+1)` entries whenever that many distinct locations exist.
pub fn peel_witness(set: &PointSet, k: usize, z: u64) -> Result<PointSet> {
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    let merged = set.merged();
    let mut remaining: Vec<usize> = (0..merged.len()).collect();
    let mut witness = Vec::new();
    for _ in 0..=z {
        if remaining.is_empty() {
            break;
        }
        let (round, _) = gonzalez_on(&merged, &remaining, k + 1, 0);
        remaining.retain(|i| !round.contains(i));
        witness.extend(round);
    }
    Ok(merged.subset(&witness))
}

/// Exact continuous k-center with `z` outliers on the line (`dim == 1`).
///
/// The optimum is a half-distance between two input points (or 0). For a
/// radius `r`, a DP over sorted locations finds the least outlier weight
/// using at most `k` intervals of length `2r`; binary search over the
/// candidates finds the smallest feasible radius.
pub fn continuous_outliers_1d(set: &PointSet, k: usize, z: u64) -> Result<f64> {
    if set.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: set.dim(),
        });
    }
    if set.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    let merged = set.merged();
    let mut pts: Vec<(f64, u64)> = (0..merged.len())
        .map(|i| (merged.point(i)[0], merged.multiplicity(i)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut cands = vec![0.0];
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            cands.push((pts[j].0 - pts[i].0) / 2.0);
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();

    let feasible = |r: f64| -> bool {
        let m = pts.len();
        const INF: u64 = u64::MAX / 2;
        // dp[i][c]: least dropped weight for the first i points with c intervals
        let mut dp = vec![vec![INF; k + 1]; m + 1];
        dp[0][0] = 0;
        for i in 0..m {
            let reach = pts[i].0 + 2.0 * r;
            let mut j = i;
            while j < m && pts[j].0 <= reach * (1.0 + 1e-15) + 1e-15 {
                j += 1;
            }
            for c in 0..=k {
                let cur = dp[i][c];
                if cur >= INF {
                    continue;
                }
                dp[i + 1][c] = dp[i + 1][c].min(cur + pts[i].1);
                if c < k {
                    dp[j][c + 1] = dp[j][c + 1].min(cur);
                }
            }
        }
        dp[m].iter().any(|&w| w <= z)
    };

    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(cands[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_dataset, DatasetKind, DatasetSpec};
    use crate::solvers::gonzalez;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_coords(1, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn tightness(d: usize) -> PointSet {
        let mut s = DatasetSpec::new(DatasetKind::OutlierTightness, d);
        s.k = 1;
        s.z = 2;
        generate_dataset(&s).unwrap()
    }

    #[test]
    fn kcenter_examples() {
        let p = line(&[0.0, 10.0, 4.0]);
        let s = exact_discrete_kcenter(&p, 2).unwrap();
        assert_eq!(s.value, 4.0);
        assert_eq!(s.center_indices, vec![0, 1]);
        assert_eq!(exact_discrete_kcenter(&p, 3).unwrap().value, 0.0);
        let two = line(&[0.0, 0.0, 7.0, 7.0]);
        assert_eq!(exact_discrete_kcenter(&two, 2).unwrap().value, 0.0);
    }

    #[test]
    fn kcenter_budget_guard() {
        let p = line(&(0..200).map(|i| i as f64).collect::<Vec<_>>());
        assert!(matches!(
            exact_discrete_kcenter(&p, 5),
            Err(Error::OracleBudgetExceeded { .. })
        ));
    }

    #[test]
    fn outliers_tightness_instance() {
        let p = tightness(2);
        let s = exact_discrete_outliers(&p, 1, 2).unwrap();
        assert!((s.value - 1.0 / 3.0).abs() < 1e-9);
        assert!((s.recompute(&p) - s.value).abs() < 1e-12);
        let dropped: u64 = s.outlier_indices.iter().map(|&i| p.multiplicity(i)).sum();
        assert!(dropped <= 2);
    }

    #[test]
    fn outliers_degenerate() {
        let p = line(&[0.0, 10.0, 4.0]);
        assert_eq!(exact_discrete_outliers(&p, 1, 3).unwrap().value, 0.0);
        assert_eq!(
            exact_discrete_outliers(&p, 2, 0).unwrap().value,
            exact_discrete_kcenter(&p, 2).unwrap().value
        );
        let single = line(&[3.0]).with_multiplicities(vec![4]).unwrap();
        for (k, z) in [(1, 0), (2, 1), (3, 9)] {
            assert_eq!(exact_discrete_outliers(&single, k, z).unwrap().value, 0.0);
        }
    }

    #[test]
    fn outliers_zero_matches_kcenter_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(1..10);
            let k = rng.random_range(1..4);
            let p = line(&(0..n).map(|_| rng.random_range(0..20) as f64).collect::<Vec<_>>());
            assert_eq!(
                exact_discrete_outliers(&p, k, 0).unwrap().value,
                exact_discrete_kcenter(&p, k).unwrap().value
            );
        }
    }

    #[test]
    fn continuous_1d_tightness_is_one_sixth() {
        let v = continuous_outliers_1d(&tightness(1), 1, 2).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn continuous_1d_small_cases() {
        assert_eq!(continuous_outliers_1d(&line(&[0.0, 4.0]), 1, 0).unwrap(), 2.0);
        assert_eq!(continuous_outliers_1d(&line(&[0.0, 4.0]), 2, 0).unwrap(), 0.0);
        assert_eq!(continuous_outliers_1d(&line(&[0.0, 4.0, 100.0]), 1, 1).unwrap(), 2.0);
        assert!(continuous_outliers_1d(&tightness(2), 1, 2).is_err());
    }

    #[test]
    fn peel_examples() {
        let p = line(&[0.0, 10.0, 4.0, 7.0, 1.0]);
        let w = peel_witness(&p, 2, 0).unwrap();
        let (s, _) = gonzalez(&p, 2, 0).unwrap();
        assert_eq!(w, p.subset(&s));
        let six = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let w = peel_witness(&six, 1, 2).unwrap();
        assert_eq!(w.len(), 6);
        let mut xs: Vec<f64> = w.iter().map(|x| x[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn witness_centers_can_be_worse_than_full() {
        // {0, 2} has no middle point to center on
        let p = line(&[0.0, 1.0, 2.0]);
        let w = peel_witness(&p, 1, 0).unwrap();
        assert_eq!(exact_discrete_outliers(&w, 1, 0).unwrap().value, 2.0);
        assert_eq!(exact_outliers_with_candidates(&w, &p, 1, 0).unwrap().value, 1.0);
        assert_eq!(exact_discrete_outliers(&p, 1, 0).unwrap().value, 1.0);
    }

    #[test]
    fn peel_factor_three_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.random_range(1..=12);
            let k = rng.random_range(1..=2);
            let z = rng.random_range(0..=2);
            let pts = (0..n).map(|_| vec![rng.random_range(0..8) as f64, rng.random_range(0..8) as f64]).collect();
            let p = PointSet::from_coords(2, pts).unwrap();
            let w = peel_witness(&p, k, z).unwrap();
            let full = exact_discrete_outliers(&p, k, z).unwrap().value;
            let wit = exact_outliers_with_candidates(&w, &p, k, z).unwrap().value;
            assert!(wit <= full + 1e-9 && wit >= full / 3.0 - 1e-9, "{wit} vs {full}");
            let own = exact_discrete_outliers(&w, k, z).unwrap().value;
            assert!(own >= full / 3.0 - 1e-9, "{own} vs {full}");
            let distinct = p.distinct_indices().len();
            assert_eq!(w.len(), distinct.min((k + 1) * (z as usize + 1)));
        }
    }
}
