//! Gaussian random maps `R^d -> R^t` and their calibration probes.

mod probes;
mod target;

pub use probes::{distortion_report, expansion_probe, tail_probe, DistortionReport};
pub use target::{target_dimension, TargetDimParams, Variant, DEFAULT_C0, DEFAULT_C_EXP, DEFAULT_C_JL};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::rng::{seeded, Normal};

/// A `t x d` matrix (row-major) with a scalar applied after the product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMap {
    d: usize,
    t: usize,
    entries: Vec<f64>,
    scale: f64,
    seed: u64,
}

impl GaussianMap {
    /// Wraps an explicit matrix. Used for fixtures and deserialisation.
    pub fn from_entries(d: usize, t: usize, entries: Vec<f64>, scale: f64, seed: u64) -> Result<Self> {
        if d == 0 || t == 0 {
            return Err(Error::invalid("d/t", "dimensions must be >= 1"));
        }
        if entries.len() != d * t {
            return Err(Error::invalid("entries", format!("expected {} entries, got {}", d * t, entries.len())));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::invalid("scale", "must be positive and finite"));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("entries", "must be finite"));
        }
        Ok(GaussianMap {
            d,
            t,
            entries,
            scale,
            seed,
        })
    }

    /// The `d x d` identity with unit scale; bypasses projection in tests.
    pub fn identity(d: usize) -> Self {
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1.0;
        }
        GaussianMap {
            d,
            t: d,
            entries,
            scale: 1.0,
            seed: 0,
        }
    }

    pub fn source_dim(&self) -> usize {
        self.d
    }

    pub fn target_dim(&self) -> usize {
        self.t
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// True when `t >= d`, i.e. no actual reduction happens.
    pub fn is_identity_regime(&self) -> bool {
        self.t >= self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.d..(i + 1) * self.d]
    }

    /// `entries * x`, without the scale.
    pub fn apply_unscaled(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.d);
        (0..self.t)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `scale * entries * x`.
    pub fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.apply_unscaled(x);
        if self.scale != 1.0 {
            for v in &mut y {
                *v *= self.scale;
            }
        }
        y
    }

    /// `entries^T * y`, without the scale.
    pub(crate) fn apply_transpose_unscaled(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.d];
        for (i, &yi) in y.iter().enumerate() {
            for (xj, a) in x.iter_mut().zip(self.row(i)) {
                *xj += a * yi;
            }
        }
        x
    }

    /// Text form: header `d t scale seed`, then `t` rows of `d` floats.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {:?} {}", self.d, self.t, self.scale, self.seed);
        for i in 0..self.t {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:?}")).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 {
            return Err(perr(1, "header must be `d t scale seed`"));
        }
        let d: usize = h[0].parse().map_err(|_| perr(1, "bad d"))?;
        let t: usize = h[1].parse().map_err(|_| perr(1, "bad t"))?;
        let scale: f64 = h[2].parse().map_err(|_| perr(1, "bad scale"))?;
        let seed: u64 = h[3].parse().map_err(|_| perr(1, "bad seed"))?;
        let mut entries = Vec::with_capacity(d * t);
        let mut rows = 0;
        for (i, line) in lines {
            let before = entries.len();
            for tok in line.split_whitespace() {
                entries.push(tok.parse::<f64>().map_err(|_| perr(i + 1, "bad float"))?);
            }
            if entries.len() - before != d {
                return Err(perr(i + 1, "row length must equal d"));
            }
            rows += 1;
        }
        if rows != t {
            return Err(perr(1, "row count must equal t"));
        }
        GaussianMap::from_entries(d, t, entries, scale, seed)
    }
}

/// Samples a `t x d` matrix of iid N(0,1) entries with unit scale.
/// Same `(d, t, seed)` gives the same matrix.
pub fn sample_map(d: usize, t: usize, seed: u64) -> Result<GaussianMap> {
    if d == 0 {
        return Err(Error::invalid("d", "must be >= 1"));
    }
    if t == 0 {
        return Err(Error::invalid("t", "must be >= 1"));
    }
    let mut rng = seeded(seed);
    let mut normal = Normal::new(&mut rng);
    let mut entries = vec![0.0; d * t];
    normal.fill(&mut entries);
    Ok(GaussianMap {
        d,
        t,
        entries,
        scale: 1.0,
        seed,
    })
}

/// Returns the map rescaled by `alpha / (c0 * sqrt(d))`, the factor that
/// turns projected k-center values into estimates for the original set.
/// The input must still carry unit scale.
pub fn scaled_for_kcenter(map: &GaussianMap, alpha: f64, c0: f64) -> Result<GaussianMap> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::invalid("alpha", format!("must be > 1, got {alpha}")));
    }
    if !(c0 > 0.0) || !c0.is_finite() {
        return Err(Error::invalid("c0", format!("must be > 0, got {c0}")));
    }
    if map.scale != 1.0 {
        return Err(Error::AlreadyScaled(map.scale));
    }
    let mut out = map.clone();
    out.scale = alpha / (c0 * (map.d as f64).sqrt());
    Ok(out)
}

/// Applies the map to every point, keeping order, multiplicities and colors.
pub fn apply_map(map: &GaussianMap, set: &PointSet) -> Result<PointSet> {
    if set.dim() != map.d {
        return Err(Error::DimensionMismatch {
            expected: map.d,
            got: set.dim(),
        });
    }
    let coords = set.iter().map(|p| map.apply_vec(p)).collect();
    let mut out = PointSet::from_coords(map.t, coords)?.with_multiplicities(set.multiplicities().to_vec())?;
    if let Some(c) = set.colors() {
        out = out.with_colors(c.to_vec())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(sample_map(7, 3, 5).unwrap(), sample_map(7, 3, 5).unwrap());
        assert_ne!(sample_map(7, 3, 5).unwrap(), sample_map(7, 3, 6).unwrap());
        assert!(sample_map(0, 3, 5).is_err());
        assert!(sample_map(3, 0, 5).is_err());
    }

    #[test]
    fn entry_mean_near_zero() {
        let m = sample_map(1000, 1000, 3).unwrap();
        let mean = m.entries().iter().sum::<f64>() / 1e6;
        // sigma of the mean is 1e-3; 0.01 is a 10-sigma band
        assert!(mean.abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn scaling() {
        let m = sample_map(100, 4, 1).unwrap();
        let s = scaled_for_kcenter(&m, 5.0, 3.0).unwrap();
        assert!((s.scale() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(s.entries(), m.entries());
        let unit = scaled_for_kcenter(&m, 30.0, 3.0).unwrap();
        assert!((unit.scale() - 1.0).abs() < 1e-15);
        assert_eq!(scaled_for_kcenter(&s, 5.0, 3.0), Err(Error::AlreadyScaled(s.scale())));
        assert!(scaled_for_kcenter(&m, 1.0, 3.0).is_err());
        assert!(scaled_for_kcenter(&m, 2.0, 0.0).is_err());
    }

    #[test]
    fn apply_examples() {
        let m = sample_map(3, 2, 9).unwrap();
        let zero = PointSet::from_coords(3, vec![vec![0.0; 3]]).unwrap();
        assert_eq!(apply_map(&m, &zero).unwrap().point(0), &[0.0, 0.0]);

        let g = GaussianMap::from_entries(1, 1, vec![-0.7], 1.0, 0).unwrap();
        let p = PointSet::from_coords(1, vec![vec![3.0]]).unwrap();
        assert_eq!(apply_map(&g, &p).unwrap().point(0), &[3.0 * -0.7]);

        let v = vec![1.0, -2.0, 0.5];
        let line = PointSet::from_coords(3, vec![vec![0.0; 3], v.clone(), v.iter().map(|x| 2.0 * x).collect()]).unwrap();
        let img = apply_map(&m, &line).unwrap();
        for (a, b) in img.point(1).iter().zip(img.point(2)) {
            assert!((2.0 * a - b).abs() < 1e-12);
        }
        assert!(matches!(apply_map(&m, &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn apply_keeps_multiplicity_and_colors() {
        let m = sample_map(2, 2, 1).unwrap();
        let p = PointSet::from_coords(2, vec![vec![1.0, 2.0], vec![3.0, 4.0]])
            .unwrap()
            .with_multiplicities(vec![3, 1])
            .unwrap()
            .with_colors(vec![1, 0])
            .unwrap();
        let q = apply_map(&m, &p).unwrap();
        assert_eq!(q.multiplicities(), p.multiplicities());
        assert_eq!(q.colors(), p.colors());
    }

    #[test]
    fn text_roundtrip() {
        let m = scaled_for_kcenter(&sample_map(5, 3, 77).unwrap(), 2.0, 3.0).unwrap();
        assert_eq!(GaussianMap::from_text(&m.to_text()).unwrap(), m);
        assert!(GaussianMap::from_text("2 1 1.0 0\n1.0\n").is_err());
    }

    proptest! {
        #[test]
        fn linear_and_homogeneous(
            seed in 0u64..1000,
            x in proptest::collection::vec(-100.0f64..100.0, 6),
            y in proptest::collection::vec(-100.0f64..100.0, 6),
            a in -10.0f64..10.0,
        ) {
            let m = scaled_for_kcenter(&sample_map(6, 4, seed).unwrap(), 3.0, 3.0).unwrap();
            let sum: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p + a * q).collect();
            let lhs = m.apply_vec(&sum);
            let (gx, gy) = (m.apply_vec(&x), m.apply_vec(&y));
            let scale = 1.0 + crate::geometry::norm(&lhs);
            for i in 0..4 {
                prop_assert!((lhs[i] - (gx[i] + a * gy[i])).abs() <= 1e-9 * scale);
            }
        }
    }
}
