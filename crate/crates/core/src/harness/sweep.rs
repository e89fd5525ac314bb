use serde::{Deserialize, Serialize};

use super::{median, ratio, solve_variant, ExperimentConfig};
use crate::dimred::{apply_map, sample_map, scaled_for_kcenter, target_dimension, TargetDimParams};
use crate::error::Result;
use crate::geometry::generate_dataset;
use crate::rng::derive_seed;

/// One row of the ratio CSV. `median` rows aggregate the `repetitions`
/// per-seed rows of one alpha (`rep` and `seed` are then empty).
///
/// CSV columns: `alpha,t,seed,rep,opt_original,original_method,
/// opt_projected,projected_method,ratio,median`. `ratio` is
/// `opt_projected / opt_original`, with `0/0` recorded as 1. Methods are
/// `oracle`, `gonzalez`, `peel-witness`, `anchored-gonzalez`, or `mixed` on
/// median rows whose per-seed methods differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub alpha: f64,
    pub t: usize,
    pub seed: Option<u64>,
    pub rep: Option<usize>,
    pub opt_original: f64,
    pub original_method: String,
    pub opt_projected: f64,
    pub projected_method: String,
    pub ratio: f64,
    pub median: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: ExperimentConfig,
    pub n: usize,
    pub d: usize,
    pub records: Vec<RatioRecord>,
}

impl SweepReport {
    pub fn medians(&self) -> impl Iterator<Item = &RatioRecord> {
        self.records.iter().filter(|r| r.median)
    }
}

fn common(methods: &[String]) -> String {
    if methods.windows(2).all(|w| w[0] == w[1]) {
        methods[0].clone()
    } else {
        "mixed".into()
    }
}

/// For each alpha: `t` from the target-dimension formula, then for each of
/// `repetitions` seeds a fresh scaled map, the variant optimum on the data
/// and on its image, and their ratio. A median row follows each alpha.
pub fn run_dimred_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    let set = config.prepare(generate_dataset(&config.dataset)?)?;
    let d = set.dim();
    let original = solve_variant(&set, config, config.exact)?;
    let mut records = Vec::new();
    for (ai, &alpha) in config.alphas.iter().enumerate() {
        let mut params = TargetDimParams::new(alpha, config.dataset.k, d);
        params.c_jl = config.c_jl;
        params.c_exp = config.c_exp;
        params.z = config.dataset.z;
        let t = target_dimension(&params, config.variant.target_variant())?;
        let mut rows = Vec::with_capacity(config.repetitions);
        for rep in 0..config.repetitions {
            let seed = derive_seed(config.seed, (ai * config.repetitions + rep) as u64);
            let map = scaled_for_kcenter(&sample_map(d, t, seed)?, alpha, config.c0)?;
            let image = apply_map(&map, &set)?;
            let projected = solve_variant(&image, config, config.exact)?;
            rows.push(RatioRecord {
                alpha,
                t,
                seed: Some(seed),
                rep: Some(rep),
                opt_original: original.value,
                original_method: original.method.into(),
                opt_projected: projected.value,
                projected_method: projected.method.into(),
                ratio: ratio(projected.value, original.value),
                median: false,
            });
        }
        let col = |f: fn(&RatioRecord) -> f64| median(&rows.iter().map(f).collect::<Vec<_>>());
        let summary = RatioRecord {
            alpha,
            t,
            seed: None,
            rep: None,
            opt_original: original.value,
            original_method: original.method.into(),
            opt_projected: col(|r| r.opt_projected),
            projected_method: common(&rows.iter().map(|r| r.projected_method.clone()).collect::<Vec<_>>()),
            ratio: col(|r| r.ratio),
            median: true,
        };
        records.extend(rows);
        records.push(summary);
    }
    Ok(SweepReport {
        config: config.clone(),
        n: set.len(),
        d,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DatasetKind, DatasetSpec};
    use crate::harness::Experiment;

    fn cfg(kind: DatasetKind, dim: usize, n: usize, k: usize) -> ExperimentConfig {
        let mut ds = DatasetSpec::new(kind, dim);
        ds.n = n;
        ds.k = k;
        ExperimentConfig::new(Experiment::DimredSweep, ds)
    }

    #[test]
    fn k_at_least_n_gives_ratio_one() {
        let mut c = cfg(DatasetKind::Line, 4, 5, 6);
        c.repetitions = 3;
        let r = run_dimred_sweep(&c).unwrap();
        assert!(r.records.iter().all(|x| x.ratio == 1.0 && x.opt_original == 0.0));
        assert_eq!(r.records.len(), 4);
        assert_eq!(r.medians().count(), 1);
    }

    #[test]
    fn identity_regime_within_jl_band() {
        // alpha small enough that t = d; scale back by c0 sqrt(d) / (alpha sqrt(t))
        let mut c = cfg(DatasetKind::GaussianClusters, 6, 40, 2);
        c.alphas = vec![1.5];
        c.dataset.separation = 5.0;
        let r = run_dimred_sweep(&c).unwrap();
        let m = r.medians().next().unwrap();
        assert_eq!(m.t, 6);
        let normalized = m.ratio * c.c0 / 1.5;
        assert!((0.5..=2.0).contains(&normalized), "{normalized}");
        assert_eq!(m.original_method, "oracle");
    }

    #[test]
    fn exact_flag_refuses_fallback() {
        let mut c = cfg(DatasetKind::GaussianClusters, 4, 300, 4);
        c.repetitions = 1;
        assert!(run_dimred_sweep(&c).is_ok());
        c.exact = true;
        assert!(matches!(
            run_dimred_sweep(&c),
            Err(crate::Error::OracleBudgetExceeded { .. })
        ));
    }

    #[test]
    fn deterministic() {
        let mut c = cfg(DatasetKind::GaussianClusters, 8, 30, 2);
        c.alphas = vec![2.0, 3.0];
        assert_eq!(run_dimred_sweep(&c).unwrap(), run_dimred_sweep(&c).unwrap());
    }
}
