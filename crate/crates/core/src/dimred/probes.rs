use serde::{Deserialize, Serialize};

use super::GaussianMap;
use crate::error::{Error, Result};
use crate::geometry::{norm, PointSet};
use crate::rng::{seeded, Normal};

const POWER_ITERATIONS: usize = 100;

/// Lower estimate of the operator norm of the unscaled matrix: the larger of
/// a power-iteration estimate on `G^T G` and the best of `trials` random unit
/// directions.
pub fn expansion_probe(map: &GaussianMap, trials: usize, seed: u64) -> f64 {
    let d = map.source_dim();
    let mut rng = seeded(seed);
    let mut normal = Normal::new(&mut rng);
    let unit = |normal: &mut Normal<_>| {
        let mut v = vec![0.0; d];
        loop {
            normal.fill(&mut v);
            let n = norm(&v);
            if n > 0.0 {
                v.iter_mut().for_each(|x| *x /= n);
                return v;
            }
        }
    };

    let mut v = unit(&mut normal);
    let mut power = norm(&map.apply_unscaled(&v));
    for _ in 0..POWER_ITERATIONS {
        let u = map.apply_transpose_unscaled(&map.apply_unscaled(&v));
        let n = norm(&u);
        if n == 0.0 {
            break;
        }
        v = u.into_iter().map(|x| x / n).collect();
        power = power.max(norm(&map.apply_unscaled(&v)));
    }

    let mut best = power;
    for _ in 0..trials.max(1) {
        let x = unit(&mut normal);
        best = best.max(norm(&map.apply_unscaled(&x)));
    }
    best
}

/// Fraction of `trials` samples `g ~ N(0, I_t)` with `||g|| >= r`.
/// Only defined where the chi tail bound applies, `r >= sqrt(5t)`.
pub fn tail_probe(t: usize, r: f64, trials: usize, seed: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::invalid("t", "must be >= 1"));
    }
    if trials < 1000 {
        return Err(Error::invalid("trials", "need at least 1000 trials"));
    }
    let threshold = (5.0 * t as f64).sqrt();
    // tolerate r = sqrt(5t) computed in floating point
    if !(r * r >= 5.0 * t as f64 * (1.0 - 1e-12)) {
        return Err(Error::TailBoundNotApplicable { r, threshold });
    }
    let mut rng = seeded(seed);
    let mut normal = Normal::new(&mut rng);
    let r2 = r * r;
    let mut hits = 0usize;
    for _ in 0..trials {
        let s: f64 = (0..t).map(|_| normal.sample().powi(2)).sum();
        if s >= r2 {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub pairs: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub eps: f64,
    /// Fraction of pairs whose ratio falls outside `[1 - eps, 1 + eps]`.
    pub outside_fraction: f64,
    /// Largest `||G u||` over the normalised pair directions `u`.
    pub max_unit_expansion: f64,
    pub t: usize,
    pub seed: u64,
}

/// Pairwise ratios `||G(p - q)|| / (sqrt(t) ||p - q||)` of the unscaled map,
/// over all pairs at nonzero distance.
pub fn distortion_report(map: &GaussianMap, set: &PointSet, eps: f64) -> Result<DistortionReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("eps", "must lie in (0, 1)"));
    }
    if set.dim() != map.source_dim() {
        return Err(Error::DimensionMismatch {
            expected: map.source_dim(),
            got: set.dim(),
        });
    }
    if set.len() < 2 {
        return Err(Error::invalid("P", "need at least two points"));
    }
    let images: Vec<Vec<f64>> = set.iter().map(|p| map.apply_unscaled(p)).collect();
    let sqrt_t = (map.target_dim() as f64).sqrt();
    let (mut pairs, mut outside) = (0usize, 0usize);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let orig = crate::geometry::dist(set.point(i), set.point(j));
            if orig == 0.0 {
                continue;
            }
            let ratio = crate::geometry::dist(&images[i], &images[j]) / (sqrt_t * orig);
            pairs += 1;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            if ratio < 1.0 - eps || ratio > 1.0 + eps {
                outside += 1;
            }
        }
    }
    if pairs == 0 {
        return Err(Error::NoNonzeroPairs);
    }
    Ok(DistortionReport {
        pairs,
        min_ratio: lo,
        max_ratio: hi,
        eps,
        outside_fraction: outside as f64 / pairs as f64,
        max_unit_expansion: hi * sqrt_t,
        t: map.target_dim(),
        seed: map.seed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimred::sample_map;

    #[test]
    fn expansion_scalar_and_row() {
        let g = GaussianMap::from_entries(1, 1, vec![-1.7], 1.0, 0).unwrap();
        assert!((expansion_probe(&g, 5, 1) - 1.7).abs() < 1e-12);
        let row = vec![3.0, -4.0, 12.0];
        let g = GaussianMap::from_entries(3, 1, row, 1.0, 0).unwrap();
        assert!((expansion_probe(&g, 5, 1) - 13.0).abs() < 1e-9);
    }

    #[test]
    fn expansion_ignores_scale() {
        let g = sample_map(20, 5, 4).unwrap();
        let s = crate::dimred::scaled_for_kcenter(&g, 2.0, 3.0).unwrap();
        assert_eq!(expansion_probe(&g, 10, 2), expansion_probe(&s, 10, 2));
    }

    #[test]
    fn expansion_wide_matrix_band() {
        // t >= d: extreme singular value near sqrt(d)(1 + sqrt(t/d)), within a factor 2
        for seed in 0..5 {
            let (d, t) = (16, 64);
            let g = sample_map(d, t, seed).unwrap();
            let want = (d as f64).sqrt() * (1.0 + (t as f64 / d as f64).sqrt());
            let got = expansion_probe(&g, 10, seed);
            assert!(got > want / 2.0 && got < want * 2.0, "{got} vs {want}");
        }
    }

    #[test]
    fn tail_probe_guards_and_determinism() {
        assert!(matches!(
            tail_probe(4, 4.0, 1000, 0),
            Err(Error::TailBoundNotApplicable { .. })
        ));
        assert!(tail_probe(4, 20f64.sqrt(), 10, 0).is_err());
        let a = tail_probe(4, 20f64.sqrt(), 5000, 3).unwrap();
        assert_eq!(a, tail_probe(4, 20f64.sqrt(), 5000, 3).unwrap());
        assert_eq!(tail_probe(4, 1e6, 1000, 3).unwrap(), 0.0);
    }

    #[test]
    fn distortion_identity_fixture() {
        let id = GaussianMap::identity(3);
        let p = PointSet::from_coords(3, vec![vec![0.0; 3], vec![1.0, 2.0, 3.0], vec![-1.0, 0.0, 5.0]]).unwrap();
        let r = distortion_report(&id, &p, 0.5).unwrap();
        assert_eq!(r.pairs, 3);
        assert!((r.min_ratio - r.max_ratio).abs() < 1e-12);
        assert!((r.min_ratio - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn distortion_pairs_and_errors() {
        let g = sample_map(2, 2, 0).unwrap();
        let two = PointSet::from_coords(2, vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(distortion_report(&g, &two, 0.3).unwrap().pairs, 1);
        let same = PointSet::from_coords(2, vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(distortion_report(&g, &same, 0.3), Err(Error::NoNonzeroPairs));
        assert!(distortion_report(&g, &two, 1.0).is_err());
    }
}
