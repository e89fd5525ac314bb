//! Reproducible experiment drivers with CSV/JSON reporting.
//!
//! Every report embeds the resolved [`ExperimentConfig`], so a report file
//! is enough to re-run the experiment.

mod bench;
mod demos;
mod sweep;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dimred::{Variant, DEFAULT_C0, DEFAULT_C_EXP, DEFAULT_C_JL};
use crate::error::{Error, Result};
use crate::geometry::{DatasetSpec, PointSet};
use crate::solvers::{
    anchored_search, exact_constrained, exact_discrete_kcenter, exact_discrete_outliers, gonzalez, peel_witness,
    AssignmentConstraint,
};
use crate::streaming::StreamMode;

pub use bench::{random_instance, run_solver_bench, BenchReport, CheckStats};
pub use demos::{
    run_lowerbound_demo, run_streaming_demo, LowerBoundReport, LowerBoundRow, StreamingReport,
};
pub use sweep::{run_dimred_sweep, RatioRecord, SweepReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    DimredSweep,
    StreamingDemo,
    LowerboundDemo,
    SolverBench,
}

impl std::str::FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::invalid("experiment", format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemVariant {
    #[default]
    Vanilla,
    Outliers,
    Capacitated,
    Fair,
}

impl ProblemVariant {
    pub fn target_variant(self) -> Variant {
        match self {
            ProblemVariant::Vanilla => Variant::Vanilla,
            ProblemVariant::Outliers => Variant::Outliers,
            ProblemVariant::Capacitated | ProblemVariant::Fair => Variant::Constrained,
        }
    }
}

fn default_alphas() -> Vec<f64> {
    vec![2.0]
}
fn default_eps() -> f64 {
    0.5
}
fn default_reps() -> usize {
    5
}
fn default_c0() -> f64 {
    DEFAULT_C0
}
fn default_c_jl() -> f64 {
    DEFAULT_C_JL
}
fn default_c_exp() -> f64 {
    DEFAULT_C_EXP
}
fn default_instances() -> usize {
    200
}
fn default_fair_a() -> f64 {
    0.0
}
fn default_fair_b() -> f64 {
    1.0
}
fn default_seeds() -> usize {
    20
}

/// Experiment description. Field names match the JSON config keys; all
/// fields but `experiment` and `dataset` have defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub dataset: DatasetSpec,
    #[serde(default)]
    pub variant: ProblemVariant,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_reps")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Fail instead of substituting a heuristic when an oracle is too large.
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub mode: StreamMode,
    #[serde(default = "default_c0")]
    pub c0: f64,
    #[serde(default = "default_c_jl")]
    pub c_jl: f64,
    #[serde(default = "default_c_exp")]
    pub c_exp: f64,
    /// Capacity `L`; defaults to `ceil(n / k)`.
    #[serde(default)]
    pub capacity: Option<u64>,
    #[serde(default = "default_fair_a")]
    pub fair_a: f64,
    #[serde(default = "default_fair_b")]
    pub fair_b: f64,
    /// Points are colored `i mod num_colors` when the dataset has no colors.
    #[serde(default)]
    pub num_colors: Option<u32>,
    /// Streaming target dimension; defaults to the variant's target dimension.
    #[serde(default)]
    pub stream_t: Option<usize>,
    /// Fraction of inserted points deleted again in generated streams.
    #[serde(default)]
    pub delete_fraction: f64,
    #[serde(default)]
    pub stream_file: Option<PathBuf>,
    /// Target dimensions for the lower-bound demo (default: halving from d).
    #[serde(default)]
    pub t_values: Vec<usize>,
    /// Seeds per target dimension in the lower-bound demo.
    #[serde(default = "default_seeds")]
    pub demo_seeds: usize,
    /// Instances for the solver bench.
    #[serde(default = "default_instances")]
    pub instances: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, dataset: DatasetSpec) -> Self {
        let v = serde_json::json!({ "experiment": experiment, "dataset": dataset });
        serde_json::from_value(v).expect("defaults fill every other field")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.dataset.validate()?;
        if self.repetitions == 0 || self.repetitions.is_multiple_of(2) {
            return Err(Error::invalid("repetitions", "must be odd"));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|&a| !(a > 1.0 && a.is_finite())) {
            return Err(Error::invalid("alphas", "need at least one alpha, all > 1"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::invalid("eps", "must lie in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.delete_fraction) {
            return Err(Error::invalid("delete_fraction", "must lie in [0, 1]"));
        }
        if self.variant == ProblemVariant::Fair {
            AssignmentConstraint::fair(self.fair_a, self.fair_b, self.num_colors.unwrap_or(1))?;
            if self.num_colors.is_none() {
                return Err(Error::invalid("num_colors", "required for the fair variant"));
            }
        }
        Ok(())
    }

    /// The assignment constraint for constrained variants on a set of the
    /// given total weight.
    pub fn constraint(&self, total_weight: u64) -> Option<AssignmentConstraint> {
        match self.variant {
            ProblemVariant::Capacitated => Some(AssignmentConstraint::Capacitated {
                capacity: self
                    .capacity
                    .unwrap_or_else(|| total_weight.div_ceil(self.dataset.k.max(1) as u64).max(1)),
            }),
            ProblemVariant::Fair => Some(AssignmentConstraint::Fair {
                a: self.fair_a,
                b: self.fair_b,
                num_colors: self.num_colors.unwrap_or(1),
            }),
            _ => None,
        }
    }

    /// Colors the set `i mod num_colors` when the fair variant needs colors
    /// the dataset does not carry.
    pub(crate) fn prepare(&self, set: PointSet) -> Result<PointSet> {
        match (self.variant, self.num_colors, set.is_colored()) {
            (ProblemVariant::Fair, Some(n), false) => {
                let colors = (0..set.len()).map(|i| (i % n as usize) as u32).collect();
                set.with_colors(colors)
            }
            _ => Ok(set),
        }
    }
}

/// One optimum estimate and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Solved {
    pub value: f64,
    pub method: &'static str,
}

/// Solves the configured variant on `set`: exact oracle when it fits the
/// budget, otherwise Gonzalez (vanilla), peeling witness (outliers) or
/// anchored search on Gonzalez centers (constrained). With `exact` set the
/// substitution is an error instead.
pub fn solve_variant(set: &PointSet, config: &ExperimentConfig, exact: bool) -> Result<Solved> {
    let k = config.dataset.k;
    let z = config.dataset.z as u64;
    let fallback = |e: Error| -> Result<()> {
        match e {
            Error::OracleBudgetExceeded { .. } if !exact => Ok(()),
            other => Err(other),
        }
    };
    match config.variant {
        ProblemVariant::Vanilla => match exact_discrete_kcenter(set, k) {
            Ok(s) => Ok(Solved {
                value: s.value,
                method: "oracle",
            }),
            Err(e) => {
                fallback(e)?;
                Ok(Solved {
                    value: gonzalez(set, k, 0)?.1.value,
                    method: "gonzalez",
                })
            }
        },
        ProblemVariant::Outliers => match exact_discrete_outliers(set, k, z) {
            Ok(s) => Ok(Solved {
                value: s.value,
                method: "oracle",
            }),
            Err(e) => {
                fallback(e)?;
                let w = peel_witness(set, k, z)?;
                Ok(Solved {
                    value: exact_discrete_outliers(&w, k, z)?.value,
                    method: "peel-witness",
                })
            }
        },
        ProblemVariant::Capacitated | ProblemVariant::Fair => {
            let c = config.constraint(set.total_weight()).expect("constrained variant");
            match exact_constrained(set, k, &c) {
                Ok(s) => Ok(Solved {
                    value: s.value,
                    method: "oracle",
                }),
                Err(e) => {
                    fallback(e)?;
                    let (_, g) = gonzalez(set, k, 0)?;
                    Ok(Solved {
                        value: anchored_search(set, &g.center_indices, &c)?,
                        method: "anchored-gonzalez",
                    })
                }
            }
        }
    }
}

/// `projected / original`, with `0/0 = 1`.
pub fn ratio(projected: f64, original: f64) -> f64 {
    if original == 0.0 && projected == 0.0 {
        1.0
    } else {
        projected / original
    }
}

/// Median of a nonempty slice (mean of the middle pair for even length).
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Paths `<base>.csv` and `<base>.json` for an output setting; a `.csv` or
/// `.json` extension on the setting is dropped first.
pub fn output_paths(out: &Path) -> (PathBuf, PathBuf) {
    let base = match out.extension().and_then(|e| e.to_str()) {
        Some("csv") | Some("json") => out.with_extension(""),
        _ => out.to_path_buf(),
    };
    (base.with_extension("csv"), base.with_extension("json"))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Sweep(SweepReport),
    LowerBound(LowerBoundReport),
    Streaming(Box<StreamingReport>),
    Bench(BenchReport),
}

#[derive(Serialize)]
struct LowerBoundCsv {
    t: usize,
    median_min_norm: f64,
    proxy_value: f64,
}

#[derive(Serialize)]
struct StreamingCsv {
    updates: usize,
    survivors: u64,
    value: Option<f64>,
    level: Option<usize>,
    cells: Option<usize>,
    offline_value: Option<f64>,
    offline_method: Option<&'static str>,
    ratio: Option<f64>,
    words_stored: u64,
    error: Option<String>,
}

#[derive(Serialize)]
struct BenchCsv<'a> {
    check: &'a str,
    passed: u64,
    failed: u64,
    ms: f64,
}

impl Report {
    /// Number of invariant violations the report records.
    pub fn violations(&self) -> u64 {
        match self {
            Report::Bench(b) => b.violations,
            Report::Streaming(s) => u64::from(!s.centers_genuine) + u64::from(!s.within_budget),
            _ => 0,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `<base>.csv` (records) and `<base>.json` (full report).
    pub fn write(&self, out: &Path) -> Result<(PathBuf, PathBuf)> {
        let (csv_path, json_path) = output_paths(out);
        if let Some(dir) = csv_path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        match self {
            Report::Sweep(r) => write_csv(&csv_path, &r.records)?,
            Report::LowerBound(r) => {
                let rows: Vec<LowerBoundCsv> = r
                    .rows
                    .iter()
                    .map(|x| LowerBoundCsv {
                        t: x.t,
                        median_min_norm: x.median_min_norm,
                        proxy_value: x.proxy_value,
                    })
                    .collect();
                write_csv(&csv_path, &rows)?
            }
            Report::Streaming(r) => write_csv(
                &csv_path,
                &[StreamingCsv {
                    updates: r.updates,
                    survivors: r.survivors,
                    value: r.answer.as_ref().map(|a| a.value),
                    level: r.answer.as_ref().map(|a| a.level),
                    cells: r.answer.as_ref().map(|a| a.cells),
                    offline_value: r.offline.map(|o| o.value),
                    offline_method: r.offline.map(|o| o.method),
                    ratio: r.ratio,
                    words_stored: r.space.words_stored,
                    error: r.error.clone(),
                }],
            )?,
            Report::Bench(r) => {
                let rows: Vec<BenchCsv> = r
                    .checks
                    .iter()
                    .map(|(name, c)| BenchCsv {
                        check: name,
                        passed: c.passed,
                        failed: c.failed,
                        ms: r.timings_ms.get(name).copied().unwrap_or(0.0),
                    })
                    .collect();
                write_csv(&csv_path, &rows)?
            }
        }
        write_json(&json_path, self)?;
        Ok((csv_path, json_path))
    }
}

/// Runs the experiment named in the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    Ok(match config.experiment {
        Experiment::DimredSweep => Report::Sweep(run_dimred_sweep(config)?),
        Experiment::LowerboundDemo => Report::LowerBound(run_lowerbound_demo(config)?),
        Experiment::StreamingDemo => Report::Streaming(Box::new(run_streaming_demo(config)?)),
        Experiment::SolverBench => Report::Bench(run_solver_bench(config)?),
    })
}
