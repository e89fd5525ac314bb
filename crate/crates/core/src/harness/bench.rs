use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use super::ExperimentConfig;
use crate::error::Result;
use crate::geometry::{dist, PointSet};
use crate::rng::{derive_seed, seeded};
use crate::solvers::{
    assignment_satisfies, enumerate_feasible_assignment, exact_discrete_kcenter, exact_discrete_outliers,
    exact_oracle, exact_outliers_with_candidates, feasible_assignment, gonzalez, peel_witness, relaxed_gonzalez,
    AssignmentConstraint,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CheckStats {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: ExperimentConfig,
    pub instances: usize,
    pub checks: BTreeMap<String, CheckStats>,
    pub violations: u64,
    /// Wall-clock milliseconds per check; excluded from determinism.
    pub timings_ms: BTreeMap<String, f64>,
}

/// Random instance with `1..=n_max` points on the integer grid `[0, 10)^d`
/// (`d` in `1..=d_max`; duplicates likely) and `k` in `1..=k_max`.
pub fn random_instance(seed: u64, n_max: usize, k_max: usize, d_max: usize) -> (PointSet, usize) {
    let mut rng = seeded(seed);
    let n = rng.random_range(1..=n_max);
    let k = rng.random_range(1..=k_max);
    let d = rng.random_range(1..=d_max);
    let coords = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(0..10) as f64).collect())
        .collect();
    (PointSet::from_coords(d, coords).expect("finite"), k)
}

const TOL: f64 = 1e-9;

struct Suite {
    checks: BTreeMap<String, CheckStats>,
    timings: BTreeMap<String, f64>,
}

impl Suite {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<Option<bool>>) -> Result<()> {
        let start = Instant::now();
        let verdict = f()?;
        *self.timings.entry(name.into()).or_default() += start.elapsed().as_secs_f64() * 1e3;
        if let Some(ok) = verdict {
            let e = self.checks.entry(name.into()).or_default();
            if ok {
                e.passed += 1;
            } else {
                e.failed += 1;
            }
        }
        Ok(())
    }
}

fn min_pairwise(set: &PointSet, idx: &[usize]) -> f64 {
    let mut m = f64::INFINITY;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            m = m.min(dist(set.point(idx[a]), set.point(idx[b])));
        }
    }
    m
}

fn random_constraint<R: Rng>(rng: &mut R, n: usize, fair: bool) -> AssignmentConstraint {
    if fair {
        const FRACS: [f64; 5] = [0.0, 0.25, 1.0 / 3.0, 0.5, 1.0];
        let a = FRACS[rng.random_range(0..3)];
        let b = FRACS[rng.random_range(2..5)].max(a);
        AssignmentConstraint::Fair { a, b, num_colors: 2 }
    } else {
        AssignmentConstraint::Capacitated {
            capacity: rng.random_range(1..=n as u64),
        }
    }
}

/// Flow feasibility vs exhaustive enumeration on one small instance.
fn flow_agrees(set: &PointSet, k: usize, seed: u64, fair: bool) -> Result<bool> {
    let mut rng = seeded(seed);
    let mut set = set.clone();
    if fair {
        let colors = (0..set.len()).map(|_| rng.random_range(0..2)).collect();
        set = set.with_colors(colors)?;
    }
    let c = random_constraint(&mut rng, set.len(), fair);
    let centers: Vec<usize> = (0..k).map(|_| rng.random_range(0..set.len())).collect();
    let mut radii: Vec<f64> = (0..set.len())
        .flat_map(|i| centers.iter().map(|&a| dist(set.point(i), set.point(a))).collect::<Vec<_>>())
        .collect();
    radii.push(0.0);
    let r = radii[rng.random_range(0..radii.len())];
    let flow = feasible_assignment(&set, &centers, r, &c)?;
    let brute = enumerate_feasible_assignment(&set, &centers, r, |a| assignment_satisfies(&set, &c, k, a))?;
    let valid = flow.as_ref().is_none_or(|p| {
        assignment_satisfies(&set, &c, k, p)
            && p.iter().enumerate().all(|(u, &j)| dist(set.point(u), set.point(centers[j])) <= r)
    });
    Ok(valid && flow.is_some() == brute.is_some())
}

/// Runs the solver property suite over `config.instances` seeded instances.
pub fn run_solver_bench(config: &ExperimentConfig) -> Result<BenchReport> {
    let mut s = Suite {
        checks: BTreeMap::new(),
        timings: BTreeMap::new(),
    };
    for i in 0..config.instances {
        let seed = derive_seed(config.seed, i as u64);
        let (p, k) = random_instance(seed, 12, 3, 4);
        let opt = exact_discrete_kcenter(&p, k)?.value;
        let (picks, g) = gonzalez(&p, k, 0)?;
        s.run("gonzalez-factor-2", || Ok(Some(g.value <= 2.0 * opt + TOL)))?;
        s.run("gonzalez-witness", || {
            Ok((picks.len() == k + 1).then(|| min_pairwise(&p, &picks) >= g.value))
        })?;
        s.run("relaxed-gonzalez", || {
            let (_, est) = relaxed_gonzalez(&p, k, 1.0, exact_oracle)?;
            Ok(Some(est >= opt / 2.0 - TOL && est <= 2.0 * opt + TOL))
        })?;

        let (q, k2) = random_instance(derive_seed(seed, 1), 14, 2, 3);
        let z = seeded(derive_seed(seed, 2)).random_range(0..=2u64);
        s.run("peel-witness-factor-3", || {
            let w = peel_witness(&q, k2, z)?;
            let full = exact_discrete_outliers(&q, k2, z)?.value;
            let wit = exact_outliers_with_candidates(&w, &q, k2, z)?.value;
            let size_ok = w.len() == q.distinct_indices().len().min((k2 + 1) * (z as usize + 1));
            Ok(Some(size_ok && wit >= full / 3.0 - TOL && wit <= full + TOL))
        })?;

        let (f, k3) = random_instance(derive_seed(seed, 3), 8, 2, 2);
        s.run("flow-vs-enumeration", || {
            Ok(Some(
                flow_agrees(&f, k3, derive_seed(seed, 4), false)? && flow_agrees(&f, k3, derive_seed(seed, 5), true)?,
            ))
        })?;
    }
    let violations = s.checks.values().map(|c| c.failed).sum();
    Ok(BenchReport {
        config: config.clone(),
        instances: config.instances,
        checks: s.checks,
        violations,
        timings_ms: s.timings,
    })
}
