use super::{dist, PointSet};
use crate::error::{Error, Result};

/// Greedy r-net indices: scan in index order, keep a point iff it is more
/// than `r` away from every point kept so far.
pub(crate) fn greedy_net_indices(set: &PointSet, candidates: &[usize], r: f64) -> Vec<usize> {
    let mut net: Vec<usize> = Vec::new();
    for &i in candidates {
        let p = set.point(i);
        if net.iter().all(|&j| dist(p, set.point(j)) > r) {
            net.push(i);
        }
    }
    net
}

/// Greedy r-net of `set`: every point is within `r` of the net, and net
/// points are pairwise more than `r` apart.
pub fn build_epsilon_net(set: &PointSet, r: f64) -> Result<PointSet> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("net radius must be positive, got {r}")));
    }
    let all: Vec<usize> = (0..set.len()).collect();
    Ok(set.subset(&greedy_net_indices(set, &all, r)))
}

/// Greedy upper estimate of the doubling dimension.
///
/// Radii form a x2 ladder from the minimum to the maximum pairwise distance
/// (the maximum is always probed). For each radius `r`, balls `B(y, r)` are
/// centred at the points `y` of a greedy r-net of the set, and each ball is
/// covered by a greedy (r/2)-net of its contents. The estimate is log2 of
/// the largest such cover.
pub fn estimate_doubling_dimension(set: &PointSet) -> Result<f64> {
    let distinct = set.distinct_indices();
    if distinct.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 distinct points, got {}",
            distinct.len()
        )));
    }
    let mut min_d = f64::INFINITY;
    let mut max_d: f64 = 0.0;
    for (a, &i) in distinct.iter().enumerate() {
        for &j in &distinct[a + 1..] {
            let d = dist(set.point(i), set.point(j));
            min_d = min_d.min(d);
            max_d = max_d.max(d);
        }
    }

    let mut radii = Vec::new();
    let mut r = min_d;
    while r < max_d {
        radii.push(r);
        r *= 2.0;
    }
    radii.push(max_d);

    let mut best = 1usize;
    for &r in &radii {
        let centers = greedy_net_indices(set, &distinct, r);
        for &y in &centers {
            let ball: Vec<usize> = distinct
                .iter()
                .copied()
                .filter(|&i| dist(set.point(i), set.point(y)) <= r)
                .collect();
            let cover = greedy_net_indices(set, &ball, r / 2.0).len();
            best = best.max(cover);
        }
    }
    Ok((best as f64).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist_to_set;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_coords(1, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn net_examples() {
        assert_eq!(build_epsilon_net(&line(&[0.0]), 1.0).unwrap(), line(&[0.0]));
        assert_eq!(
            build_epsilon_net(&line(&[0.0, 0.5, 3.0]), 1.0).unwrap(),
            line(&[0.0, 3.0])
        );
        let dup = line(&[2.5; 7]);
        assert_eq!(build_epsilon_net(&dup, 0.1).unwrap().len(), 1);
    }

    #[test]
    fn net_rejects_nonpositive_radius() {
        assert!(build_epsilon_net(&line(&[0.0]), 0.0).is_err());
        assert!(build_epsilon_net(&line(&[0.0]), -1.0).is_err());
    }

    #[test]
    fn doubling_line_in_r4() {
        let pts: Vec<Vec<f64>> = (0..16).map(|i| vec![i as f64, 0.0, 0.0, 0.0]).collect();
        let est = estimate_doubling_dimension(&PointSet::from_coords(4, pts).unwrap()).unwrap();
        assert!(est <= 3.0, "estimate {est}");
    }

    #[test]
    fn doubling_two_points_and_duplicates() {
        let two = line(&[0.0, 1.0]);
        let e = estimate_doubling_dimension(&two).unwrap();
        assert!(e <= 1.0);
        let dup = line(&[0.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(estimate_doubling_dimension(&dup).unwrap(), e);
        let weighted = two.clone().with_multiplicities(vec![5, 9]).unwrap();
        assert_eq!(estimate_doubling_dimension(&weighted).unwrap(), e);
    }

    #[test]
    fn doubling_degenerate() {
        assert!(matches!(
            estimate_doubling_dimension(&line(&[3.0, 3.0])),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn doubling_monotone_under_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pts: Vec<Vec<f64>> = (0..30)
                .map(|_| (0..3).map(|_| rng.random_range(-5.0..5.0)).collect())
                .collect();
            let p = PointSet::from_coords(3, pts).unwrap();
            let keep: Vec<usize> = (0..30).filter(|_| rng.random_bool(0.5)).collect();
            let q = p.subset(&keep);
            if q.distinct_indices().len() < 2 {
                continue;
            }
            let (eq, ep) = (
                estimate_doubling_dimension(&q).unwrap(),
                estimate_doubling_dimension(&p).unwrap(),
            );
            assert!(eq <= ep + 1.0, "{eq} > {ep} + 1");
        }
    }

    proptest! {
        #[test]
        fn net_covers_and_packs(
            xs in proptest::collection::vec(proptest::collection::vec(-10.0f64..10.0, 2), 1..40),
            r in 0.05f64..5.0,
        ) {
            let p = PointSet::from_coords(2, xs).unwrap();
            let net = build_epsilon_net(&p, r).unwrap();
            for q in p.iter() {
                prop_assert!(dist_to_set(q, &net).unwrap() <= r);
            }
            for i in 0..net.len() {
                for j in i + 1..net.len() {
                    prop_assert!(dist(net.point(i), net.point(j)) > r);
                }
            }
        }
    }
}
