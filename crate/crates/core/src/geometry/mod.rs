//! Point sets and Euclidean primitives.

mod dataset;
mod io;
mod net;

pub use dataset::{generate_dataset, DatasetKind, DatasetSpec};
pub use io::{read_point_set, write_point_set};
pub use net::{build_epsilon_net, estimate_doubling_dimension};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `R^d`. Coordinates are always finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("coords", "point must have at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(Point(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Euclidean distance between two coordinate slices of equal length.
#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// An ordered multiset of points in `R^dim`, with optional per-point colors.
///
/// Entries may repeat coordinates; multiplicities are a compact way of
/// repeating one entry. Total weight is the sum of multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
    multiplicity: Vec<u64>,
    colors: Option<Vec<u32>>,
}

impl PointSet {
    pub fn empty(dim: usize) -> Self {
        PointSet {
            dim,
            points: Vec::new(),
            multiplicity: Vec::new(),
            colors: None,
        }
    }

    /// Builds a set of unit-multiplicity, uncolored points.
    pub fn from_coords(dim: usize, coords: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        let mut points = Vec::with_capacity(coords.len());
        for (i, c) in coords.into_iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.len(),
                });
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
            points.push(Point(c));
        }
        let n = points.len();
        Ok(PointSet {
            dim,
            points,
            multiplicity: vec![1; n],
            colors: None,
        })
    }

    pub fn with_multiplicities(mut self, multiplicity: Vec<u64>) -> Result<Self> {
        if multiplicity.len() != self.points.len() {
            return Err(Error::invalid("multiplicity", "length must equal point count"));
        }
        if multiplicity.contains(&0) {
            return Err(Error::invalid("multiplicity", "must be >= 1"));
        }
        self.multiplicity = multiplicity;
        Ok(self)
    }

    pub fn with_colors(mut self, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != self.points.len() {
            return Err(Error::invalid("colors", "length must equal point count"));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    /// Appends a point. Colors must be given iff the set is colored (or empty).
    pub fn push(&mut self, coords: Vec<f64>, multiplicity: u64, color: Option<u32>) -> Result<()> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: coords.len(),
            });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                index: self.points.len(),
            });
        }
        if multiplicity == 0 {
            return Err(Error::invalid("multiplicity", "must be >= 1"));
        }
        match (&mut self.colors, color) {
            (Some(cs), Some(c)) => cs.push(c),
            (None, None) => {}
            (None, Some(c)) if self.points.is_empty() => self.colors = Some(vec![c]),
            _ => return Err(Error::invalid("colors", "colors must be present for all points or none")),
        }
        self.points.push(Point(coords));
        self.multiplicity.push(multiplicity);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i].0
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.points.iter().map(|p| p.0.as_slice())
    }

    pub fn multiplicity(&self, i: usize) -> u64 {
        self.multiplicity[i]
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicity
    }

    pub fn color(&self, i: usize) -> Option<u32> {
        self.colors.as_ref().map(|c| c[i])
    }

    pub fn colors(&self) -> Option<&[u32]> {
        self.colors.as_deref()
    }

    pub fn is_colored(&self) -> bool {
        self.colors.is_some()
    }

    /// n = sum of multiplicities.
    pub fn total_weight(&self) -> u64 {
        self.multiplicity.iter().sum()
    }

    /// Sub-multiset made of the given entries, in the given order.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            multiplicity: indices.iter().map(|&i| self.multiplicity[i]).collect(),
            colors: self
                .colors
                .as_ref()
                .map(|c| indices.iter().map(|&i| c[i]).collect()),
        }
    }

    /// Index of the first entry of every distinct location, in index order.
    pub fn distinct_indices(&self) -> Vec<usize> {
        let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            // -0.0 and 0.0 are the same location
            let key: Vec<u64> = p.0.iter().map(|x| (x + 0.0).to_bits()).collect();
            if seen.insert(key) {
                out.push(i);
            }
        }
        out
    }

    /// Merges entries at identical locations, summing multiplicities.
    /// Colors are dropped. Order follows first occurrence.
    pub fn merged(&self) -> PointSet {
        let mut index: std::collections::HashMap<Vec<u64>, usize> = std::collections::HashMap::new();
        let mut points = Vec::new();
        let mut mult: Vec<u64> = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            let key: Vec<u64> = p.0.iter().map(|x| (x + 0.0).to_bits()).collect();
            match index.get(&key) {
                Some(&j) => mult[j] += self.multiplicity[i],
                None => {
                    index.insert(key, points.len());
                    points.push(p.clone());
                    mult.push(self.multiplicity[i]);
                }
            }
        }
        PointSet {
            dim: self.dim,
            points,
            multiplicity: mult,
            colors: None,
        }
    }

    /// Same points with every multiplicity expanded into unit entries.
    pub fn expanded(&self) -> PointSet {
        let mut out = PointSet::empty(self.dim);
        for i in 0..self.len() {
            for _ in 0..self.multiplicity[i] {
                out.points.push(self.points[i].clone());
                out.multiplicity.push(1);
                if let Some(c) = &self.colors {
                    out.colors.get_or_insert_with(Vec::new).push(c[i]);
                }
            }
        }
        out
    }

    pub(crate) fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other,
            });
        }
        Ok(())
    }
}

/// `min_{c in centers} ||p - c||`.
pub fn dist_to_set(p: &[f64], centers: &PointSet) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::EmptyCenterSet);
    }
    centers.check_dim(p.len())?;
    Ok(centers
        .iter()
        .map(|c| dist(p, c))
        .fold(f64::INFINITY, f64::min))
}

/// `min_{i in idx} ||p - P[i]||` without materialising a subset.
pub(crate) fn dist_to_indices(p: &[f64], set: &PointSet, idx: &[usize]) -> f64 {
    idx.iter()
        .map(|&i| dist(p, set.point(i)))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set1(xs: &[f64]) -> PointSet {
        PointSet::from_coords(1, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn dist_to_set_examples() {
        assert_eq!(dist_to_set(&[0.0], &set1(&[0.0])).unwrap(), 0.0);
        let c = PointSet::from_coords(2, vec![vec![0.0, 0.0], vec![10.0, 0.0]]).unwrap();
        assert_eq!(dist_to_set(&[3.0, 4.0], &c).unwrap(), 5.0);
        assert_eq!(dist_to_set(&[4.0], &set1(&[0.0, 10.0])).unwrap(), 4.0);
    }

    #[test]
    fn dist_to_set_errors() {
        assert_eq!(dist_to_set(&[0.0], &PointSet::empty(1)), Err(Error::EmptyCenterSet));
        assert!(matches!(
            dist_to_set(&[0.0, 1.0], &set1(&[0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_nan_and_ragged() {
        assert!(PointSet::from_coords(1, vec![vec![f64::NAN]]).is_err());
        assert!(PointSet::from_coords(2, vec![vec![1.0]]).is_err());
        assert!(set1(&[1.0]).with_multiplicities(vec![0]).is_err());
    }

    #[test]
    fn push_enforces_color_consistency() {
        let mut s = PointSet::empty(1);
        s.push(vec![0.0], 1, Some(0)).unwrap();
        assert!(s.push(vec![1.0], 1, None).is_err());
        let mut u = set1(&[0.0]);
        assert!(u.push(vec![1.0], 1, Some(2)).is_err());
    }

    #[test]
    fn merged_and_distinct() {
        let s = set1(&[1.0, 2.0, 1.0, -0.0, 0.0]).with_multiplicities(vec![1, 2, 3, 1, 1]).unwrap();
        assert_eq!(s.distinct_indices(), vec![0, 1, 3]);
        let m = s.merged();
        assert_eq!(m.multiplicities(), &[4, 2, 2]);
        assert_eq!(s.expanded().len(), 8);
        assert_eq!(s.total_weight(), 8);
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            a in proptest::collection::vec(-1e3f64..1e3, 3),
            b in proptest::collection::vec(-1e3f64..1e3, 3),
            c in proptest::collection::vec(-1e3f64..1e3, 3),
        ) {
            prop_assert!(dist(&a, &c) <= dist(&a, &b) + dist(&b, &c) + 1e-9);
        }
    }
}
