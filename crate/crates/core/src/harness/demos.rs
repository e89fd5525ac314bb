use rand::seq::SliceRandom;
use serde::Serialize;

use super::{median, ratio, solve_variant, ExperimentConfig, ProblemVariant, Solved};
use crate::dimred::{sample_map, target_dimension, TargetDimParams};
use crate::error::{Error, Result};
use crate::geometry::{generate_dataset, DatasetKind, PointSet};
use crate::rng::{derive_seed, seeded};
use crate::streaming::{
    init_stream, parse_stream, SpaceReport, StreamAnswer, StreamConfig, StreamUpdate, Op,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundRow {
    pub t: usize,
    /// Median over seeds of `min_i ||G e_i||`, with `G` having N(0, 1/t) entries.
    pub median_min_norm: f64,
    /// Upper bound on the projected optimum implied by the shortest image:
    /// half of `median_min_norm`.
    pub proxy_value: f64,
    pub per_seed: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub config: ExperimentConfig,
    pub k: usize,
    pub d: usize,
    /// Unprojected optimum of `{e_1, ..., e_k, 0}` (for k >= 2).
    pub original_value: f64,
    pub rows: Vec<LowerBoundRow>,
}

fn default_ts(d: usize) -> Vec<usize> {
    let mut ts = Vec::new();
    let mut t = d;
    while t >= 1 {
        ts.push(t);
        t /= 2;
    }
    ts
}

/// Shrinkage of the shortest projected basis vector as `t` decreases, for
/// the `k` orthonormal vectors plus origin (uses `dataset.k`, `dataset.dim`).
pub fn run_lowerbound_demo(config: &ExperimentConfig) -> Result<LowerBoundReport> {
    let k = config.dataset.k;
    let d = config.dataset.dim;
    if k > d {
        return Err(Error::invalid("k", format!("k={k} exceeds d={d}")));
    }
    if config.demo_seeds == 0 {
        return Err(Error::invalid("demo_seeds", "must be >= 1"));
    }
    let ts = if config.t_values.is_empty() {
        default_ts(d)
    } else {
        config.t_values.clone()
    };
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        if t == 0 {
            return Err(Error::invalid("t_values", "entries must be >= 1"));
        }
        let per_seed: Vec<f64> = (0..config.demo_seeds)
            .map(|s| {
                let map = sample_map(d, t, derive_seed(config.seed, (t * 1_000_003 + s) as u64))?;
                let norm = (t as f64).sqrt();
                Ok((0..k)
                    .map(|i| {
                        let mut e = vec![0.0; d];
                        e[i] = 1.0;
                        crate::geometry::norm(&map.apply_unscaled(&e)) / norm
                    })
                    .fold(f64::INFINITY, f64::min))
            })
            .collect::<Result<_>>()?;
        let m = median(&per_seed);
        rows.push(LowerBoundRow {
            t,
            median_min_norm: m,
            proxy_value: m / 2.0,
            per_seed,
        });
    }
    Ok(LowerBoundReport {
        config: config.clone(),
        k,
        d,
        original_value: if k >= 2 { 0.5 } else { 0.0 },
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamingReport {
    pub config: ExperimentConfig,
    pub stream_config: StreamConfig,
    pub updates: usize,
    pub survivors: u64,
    pub budget: u64,
    pub answer: Option<StreamAnswer>,
    pub error: Option<String>,
    pub offline: Option<Solved>,
    /// `answer.value / offline.value` (0/0 = 1).
    pub ratio: Option<f64>,
    /// Every returned center is a surviving input point.
    pub centers_genuine: bool,
    pub within_budget: bool,
    pub space: SpaceReport,
}

/// Rescales a point set onto the integer grid `[1, delta]^d` with one
/// common scale for all axes.
fn to_grid(set: &PointSet, delta: u32, exact_ints: bool) -> Vec<Vec<u32>> {
    if exact_ints {
        return set
            .iter()
            .map(|p| p.iter().map(|&x| x.round().clamp(1.0, delta as f64) as u32).collect())
            .collect();
    }
    let (lo, hi) = set
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    set.iter()
        .map(|p| {
            p.iter()
                .map(|&x| 1 + ((x - lo) / span * (delta - 1) as f64).round() as u32)
                .collect()
        })
        .collect()
}

fn generated_stream(config: &ExperimentConfig) -> Result<(usize, u32, Vec<StreamUpdate>)> {
    let set = generate_dataset(&config.dataset)?;
    let delta = config.dataset.delta;
    let pts = to_grid(&set, delta, config.dataset.kind == DatasetKind::GridUniform);
    let ncol = config.num_colors;
    let mut ups = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        for _ in 0..set.multiplicity(i) {
            let mut u = StreamUpdate::insert(p.clone());
            if let Some(n) = ncol {
                u = u.with_color((i % n as usize) as u32);
            }
            ups.push(u);
        }
    }
    let mut order: Vec<usize> = (0..ups.len()).collect();
    order.shuffle(&mut seeded(derive_seed(config.seed, 0xde1e7e)));
    let deletes = (config.delete_fraction * ups.len() as f64).floor() as usize;
    let dels: Vec<StreamUpdate> = order[..deletes]
        .iter()
        .map(|&i| StreamUpdate {
            op: Op::Delete,
            ..ups[i].clone()
        })
        .collect();
    ups.extend(dels);
    Ok((set.dim(), delta, ups))
}

/// Streams a generated (or file) update sequence, queries the configured
/// variant and compares it against the offline solver on the projected
/// surviving points.
pub fn run_streaming_demo(config: &ExperimentConfig) -> Result<StreamingReport> {
    config.validate()?;
    let (d, delta, updates) = match &config.stream_file {
        Some(path) => parse_stream(&std::fs::read_to_string(path)?)?,
        None => generated_stream(config)?,
    };
    let alpha = config.alphas[0];
    let t = match config.stream_t {
        Some(t) => t,
        None => {
            let mut p = TargetDimParams::new(alpha, config.dataset.k, d);
            p.c_jl = config.c_jl;
            p.c_exp = config.c_exp;
            p.z = config.dataset.z;
            target_dimension(&p, config.variant.target_variant())?
        }
    };
    let sc = StreamConfig {
        d,
        t,
        delta,
        k: config.dataset.k,
        z: config.dataset.z as u64,
        eps: config.eps,
        alpha,
        c0: config.c0,
        seed: config.seed,
        mode: config.mode,
        num_colors: config.num_colors,
    };
    let mut state = init_stream(sc.clone())?;
    state.process_all(&updates)?;

    let mut live: std::collections::BTreeMap<(Vec<u32>, Option<u32>), i64> = Default::default();
    for u in &updates {
        *live.entry((u.point.clone(), u.color)).or_default() += if u.op == Op::Insert { 1 } else { -1 };
    }
    live.retain(|_, c| *c > 0);
    let mut surv = PointSet::empty(t);
    for ((p, c), m) in &live {
        surv.push(state.project(p), *m as u64, *c)?;
    }

    let query = match config.variant {
        ProblemVariant::Vanilla => state.query_vanilla(),
        ProblemVariant::Outliers => state.query_outliers(config.dataset.z as u64),
        ProblemVariant::Capacitated | ProblemVariant::Fair => {
            let c = config.constraint(surv.total_weight()).expect("constrained variant");
            state.query_constrained(&c)
        }
    };
    let (answer, error) = match query {
        Ok(a) => (Some(a), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let offline = if surv.is_empty() {
        None
    } else {
        Some(solve_variant(&surv, config, false)?)
    };
    let ratio = match (&answer, &offline) {
        (Some(a), Some(o)) => Some(ratio(a.value, o.value)),
        _ => None,
    };
    let centers_genuine = answer
        .as_ref()
        .is_none_or(|a| a.centers.iter().all(|c| live.keys().any(|(p, _)| p == c)));
    let within_budget = answer.as_ref().is_none_or(|a| a.cells as u64 <= state.budget());
    Ok(StreamingReport {
        config: config.clone(),
        stream_config: sc,
        updates: updates.len(),
        survivors: surv.total_weight(),
        budget: state.budget(),
        answer,
        error,
        offline,
        ratio,
        centers_genuine,
        within_budget,
        space: state.space_report(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DatasetSpec;
    use crate::harness::Experiment;

    #[test]
    fn lowerbound_t_equals_d_near_one() {
        let mut ds = DatasetSpec::new(DatasetKind::OrthonormalPlusOrigin, 64);
        ds.k = 64;
        let mut c = ExperimentConfig::new(Experiment::LowerboundDemo, ds);
        c.t_values = vec![64, 4];
        c.demo_seeds = 5;
        let r = run_lowerbound_demo(&c).unwrap();
        assert!(r.rows[0].median_min_norm > 0.6 && r.rows[0].median_min_norm <= 1.0);
        assert!(r.rows[1].median_min_norm < r.rows[0].median_min_norm);
        assert_eq!(r.original_value, 0.5);
    }

    #[test]
    fn lowerbound_rejects_k_above_d() {
        let mut ds = DatasetSpec::new(DatasetKind::OrthonormalPlusOrigin, 4);
        ds.k = 5;
        let c = ExperimentConfig::new(Experiment::LowerboundDemo, ds);
        assert!(run_lowerbound_demo(&c).is_err());
    }

    #[test]
    fn default_t_ladder() {
        assert_eq!(default_ts(10), vec![10, 5, 2, 1]);
    }

    #[test]
    fn grid_conversion_is_in_range() {
        let set = PointSet::from_coords(2, vec![vec![-3.0, 0.5], vec![7.0, 1.0]]).unwrap();
        let g = to_grid(&set, 100, false);
        assert!(g.iter().flatten().all(|&x| (1..=100).contains(&x)));
        assert_eq!(g[0][0], 1);
        assert_eq!(g[1][0], 100);
    }

    #[test]
    fn streaming_demo_that_empties() {
        let mut ds = DatasetSpec::new(DatasetKind::GridUniform, 3);
        ds.n = 20;
        ds.delta = 50;
        let mut c = ExperimentConfig::new(Experiment::StreamingDemo, ds);
        c.delete_fraction = 1.0;
        c.stream_t = Some(2);
        let r = run_streaming_demo(&c).unwrap();
        assert_eq!(r.error.as_deref(), Some("empty stream"));
        assert!(r.answer.is_none() && r.ratio.is_none());
        assert_eq!(r.survivors, 0);
    }

    #[test]
    fn streaming_demo_repeated_point() {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::from("3 16 1000\n");
        for _ in 0..1000 {
            text.push_str("+ 4 5 6\n");
        }
        let one = dir.path().join("one.txt");
        std::fs::write(&one, "3 16 1\n+ 4 5 6\n").unwrap();
        let many = dir.path().join("many.txt");
        std::fs::write(&many, text).unwrap();
        let mut c = ExperimentConfig::new(Experiment::StreamingDemo, DatasetSpec::new(DatasetKind::GridUniform, 3));
        c.stream_t = Some(2);
        c.stream_file = Some(one);
        let a = run_streaming_demo(&c).unwrap();
        c.stream_file = Some(many);
        let b = run_streaming_demo(&c).unwrap();
        assert_eq!(a.ratio, Some(1.0));
        assert_eq!(b.ratio, Some(1.0));
        assert_eq!(a.space.words_stored, b.space.words_stored);
        assert!(b.centers_genuine);
    }
}
