use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{build_epsilon_net, PointSet};
use crate::error::{Error, Result};
use crate::rng::{seeded, Normal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    /// `k` isotropic unit-variance clusters plus `z` far outliers.
    GaussianClusters,
    /// Greedy `separation`-net of `n` uniform points on the unit sphere.
    SphereNet,
    /// `n` equally spaced points along the first axis.
    Line,
    /// `{e_1, ..., e_k, 0}`.
    OrthonormalPlusOrigin,
    /// `k+1` unit-distance locations with multiplicity `z`, plus one point at
    /// distance 1/3 from the first location.
    OutlierTightness,
    /// `n` uniform integer points of `[1, delta]^dim`.
    GridUniform,
}

fn default_n() -> usize {
    100
}
fn default_k() -> usize {
    2
}
fn default_separation() -> f64 {
    1.0
}
fn default_delta() -> u32 {
    1024
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    pub dim: usize,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub z: usize,
    #[serde(default = "default_separation")]
    pub separation: f64,
    #[serde(default = "default_delta")]
    pub delta: u32,
    #[serde(default)]
    pub seed: u64,
}

impl DatasetSpec {
    pub fn new(kind: DatasetKind, dim: usize) -> Self {
        DatasetSpec {
            kind,
            dim,
            n: default_n(),
            k: default_k(),
            z: 0,
            separation: default_separation(),
            delta: default_delta(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(Error::invalid("separation", "must be positive and finite"));
        }
        match self.kind {
            DatasetKind::GaussianClusters => {
                if self.k == 0 {
                    return Err(Error::invalid("k", "must be >= 1"));
                }
                if self.n < self.k {
                    return Err(Error::invalid("n", "need at least one point per cluster"));
                }
            }
            DatasetKind::SphereNet | DatasetKind::Line => {
                if self.n == 0 {
                    return Err(Error::invalid("n", "must be >= 1"));
                }
            }
            DatasetKind::OrthonormalPlusOrigin => {
                if self.k == 0 || self.k > self.dim {
                    return Err(Error::invalid("k", format!("need 1 <= k <= dim={}", self.dim)));
                }
            }
            DatasetKind::OutlierTightness => {
                if self.k == 0 || self.k > self.dim {
                    return Err(Error::invalid("k", format!("need 1 <= k <= dim={}", self.dim)));
                }
                if self.z == 0 {
                    return Err(Error::invalid("z", "must be >= 1"));
                }
            }
            DatasetKind::GridUniform => {
                if self.n == 0 {
                    return Err(Error::invalid("n", "must be >= 1"));
                }
                if self.delta < 1 {
                    return Err(Error::invalid("delta", "must be >= 1"));
                }
            }
        }
        Ok(())
    }
}

/// Deterministic function of the `DatasetSpec`, seed included.
pub fn generate_dataset(spec: &DatasetSpec) -> Result<PointSet> {
    spec.validate()?;
    let d = spec.dim;
    let mut rng = seeded(spec.seed);
    match spec.kind {
        DatasetKind::GaussianClusters => {
            let mut normal = Normal::new(&mut rng);
            let centers: Vec<Vec<f64>> = (0..spec.k)
                .map(|_| (0..d).map(|_| spec.separation * normal.sample()).collect())
                .collect();
            let mut pts = Vec::with_capacity(spec.n + spec.z);
            for i in 0..spec.n {
                let c = &centers[i % spec.k];
                pts.push(c.iter().map(|x| x + normal.sample()).collect::<Vec<f64>>());
            }
            // outliers sit on a sphere well outside every cluster
            let far = 10.0 * (spec.separation + 1.0) * (d as f64).sqrt();
            for _ in 0..spec.z {
                let mut dir = vec![0.0; d];
                normal.fill(&mut dir);
                let len = super::norm(&dir).max(f64::MIN_POSITIVE);
                pts.push(dir.iter().map(|x| far * x / len).collect());
            }
            PointSet::from_coords(d, pts)
        }
        DatasetKind::SphereNet => {
            let mut normal = Normal::new(&mut rng);
            let pts: Vec<Vec<f64>> = (0..spec.n)
                .map(|_| {
                    let mut v = vec![0.0; d];
                    normal.fill(&mut v);
                    let len = super::norm(&v).max(f64::MIN_POSITIVE);
                    v.iter().map(|x| x / len).collect()
                })
                .collect();
            build_epsilon_net(&PointSet::from_coords(d, pts)?, spec.separation)
        }
        DatasetKind::Line => {
            let pts = (0..spec.n)
                .map(|i| {
                    let mut v = vec![0.0; d];
                    v[0] = i as f64 * spec.separation;
                    v
                })
                .collect();
            PointSet::from_coords(d, pts)
        }
        DatasetKind::OrthonormalPlusOrigin => {
            let mut pts: Vec<Vec<f64>> = (0..spec.k)
                .map(|i| {
                    let mut v = vec![0.0; d];
                    v[i] = 1.0;
                    v
                })
                .collect();
            pts.push(vec![0.0; d]);
            PointSet::from_coords(d, pts)
        }
        DatasetKind::OutlierTightness => {
            let vertices = regular_simplex(spec.k, d);
            let mut near: Vec<f64> = vertices[0]
                .iter()
                .zip(&vertices[1])
                .map(|(a, b)| a + (b - a) / 3.0)
                .collect();
            // keep the coordinate exact in the 1-D case
            if spec.k == 1 {
                near[0] = 1.0 / 3.0;
            }
            let mut pts = vertices;
            pts.push(near);
            let mut mult = vec![spec.z as u64; spec.k + 1];
            mult.push(1);
            PointSet::from_coords(d, pts)?.with_multiplicities(mult)
        }
        DatasetKind::GridUniform => {
            let pts = (0..spec.n)
                .map(|_| (0..d).map(|_| rng.random_range(1..=spec.delta) as f64).collect())
                .collect();
            PointSet::from_coords(d, pts)
        }
    }
}

/// `k+1` vertices of a regular simplex with unit edges, built in the first
/// `k` coordinates of `R^dim` (requires `k <= dim`). Vertex 0 is the origin.
fn regular_simplex(k: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut verts: Vec<Vec<f64>> = vec![vec![0.0; dim]];
    for i in 1..=k {
        let m = verts.len() as f64;
        let centroid: Vec<f64> = (0..dim)
            .map(|c| verts.iter().map(|v| v[c]).sum::<f64>() / m)
            .collect();
        let r2: f64 = super::dist(&centroid, &verts[0]).powi(2);
        let mut v = centroid;
        v[i - 1] = (1.0 - r2).sqrt();
        verts.push(v);
    }
    verts
}
