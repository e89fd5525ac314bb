//! Turnstile (insert/delete) streaming k-center over `[Δ]^d`.
//!
//! Every update is projected once by a Gaussian map into `R^t` and snapped
//! to a grid at each level of a geometric guess ladder. Each level keeps
//! the nonempty cells (with multiplicities and optional per-color counts)
//! and a two-level sampler whose items carry the original point. Queries
//! solve on the cells of the finest level that stayed within budget.
//!
//! Two storage modes share the same grid and query code: `ExactSim` keeps
//! keyed collections and enforces the budget on every update; `Sketch`
//! keeps only linear sketches and learns at query time whether a level
//! decodes.

mod query;
mod sketch;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dimred::{sample_map, scaled_for_kcenter, GaussianMap, DEFAULT_C0};
use crate::error::{Error, Result};
use crate::rng::seeded;

pub use query::{LevelSpace, SampledPoint, SpaceReport, StreamAnswer};
pub use sketch::{Fingerprinter, ItemId, OneSparseRecovery, SampleVerdict, SparseRecovery, TwoLevelSampler};

const SAMPLER_REPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StreamMode {
    #[default]
    ExactSim,
    Sketch,
}

impl std::str::FromStr for StreamMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-sim" => Ok(StreamMode::ExactSim),
            "sketch" => Ok(StreamMode::Sketch),
            other => Err(Error::invalid("mode", format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamConfig {
    pub d: usize,
    pub t: usize,
    pub delta: u32,
    pub k: usize,
    #[serde(default)]
    pub z: u64,
    pub eps: f64,
    pub alpha: f64,
    #[serde(default = "default_c0")]
    pub c0: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: StreamMode,
    #[serde(default)]
    pub num_colors: Option<u32>,
}

fn default_c0() -> f64 {
    DEFAULT_C0
}

impl StreamConfig {
    pub fn new(d: usize, t: usize, delta: u32, k: usize) -> Self {
        StreamConfig {
            d,
            t,
            delta,
            k,
            z: 0,
            eps: 0.5,
            alpha: 2.0,
            c0: DEFAULT_C0,
            seed: 0,
            mode: StreamMode::ExactSim,
            num_colors: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::invalid("d", "must be >= 1"));
        }
        if self.t == 0 || self.t > self.d {
            return Err(Error::invalid("t", format!("need 1 <= t <= d, got t={} d={}", self.t, self.d)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::invalid("eps", "must lie in (0, 1)"));
        }
        if self.delta < 2 {
            return Err(Error::invalid("delta", "must be >= 2"));
        }
        if self.k == 0 {
            return Err(Error::invalid("k", "must be >= 1"));
        }
        if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
            return Err(Error::invalid("alpha", "must be a finite value >= 1"));
        }
        if !(self.c0 > 0.0 && self.c0.is_finite()) {
            return Err(Error::invalid("c0", "must be positive"));
        }
        if self.num_colors == Some(0) {
            return Err(Error::invalid("num_colors", "must be >= 1 when given"));
        }
        Ok(())
    }

    /// Per-level budget on nonempty cells: `(k+z+1) * ceil(8/eps)^t`,
    /// saturating at `u64::MAX`.
    pub fn budget(&self) -> u64 {
        let base = (8.0 / self.eps).ceil() as u64;
        let mut b = (self.k as u64).saturating_add(self.z).saturating_add(1);
        for _ in 0..self.t {
            b = b.saturating_mul(base);
        }
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Insert,
    Delete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamUpdate {
    pub op: Op,
    pub point: Vec<u32>,
    #[serde(default)]
    pub color: Option<u32>,
}

impl StreamUpdate {
    pub fn insert(point: Vec<u32>) -> Self {
        StreamUpdate {
            op: Op::Insert,
            point,
            color: None,
        }
    }

    pub fn delete(point: Vec<u32>) -> Self {
        StreamUpdate {
            op: Op::Delete,
            point,
            color: None,
        }
    }

    pub fn with_color(mut self, color: u32) -> Self {
        self.color = Some(color);
        self
    }

    fn delta(&self) -> i64 {
        match self.op {
            Op::Insert => 1,
            Op::Delete => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridKey {
    pub guess_level: usize,
    pub cell: Vec<i64>,
}

/// Bijections between cells, points and the integers fed to the sketches.
#[derive(Debug, Clone, PartialEq)]
struct Codec {
    d: usize,
    delta: u32,
    ncol: u32,
    radix: Vec<BigUint>,
    point_space: BigUint,
}

fn zigzag(c: i64) -> u64 {
    if c >= 0 {
        (c as u64) << 1
    } else {
        ((-(c + 1)) as u64) << 1 | 1
    }
}

fn unzigzag(z: u64) -> i64 {
    if z & 1 == 0 {
        (z >> 1) as i64
    } else {
        -((z >> 1) as i64) - 1
    }
}

impl Codec {
    fn cell_id(&self, level: usize, cell: &[i64]) -> ItemId {
        let r = &self.radix[level];
        let mut v = BigUint::zero();
        for &c in cell.iter().rev() {
            v = v * r + zigzag(c);
        }
        ItemId::new(v)
    }

    fn decode_cell(&self, level: usize, id: &BigUint, t: usize) -> Vec<i64> {
        let r = &self.radix[level];
        let mut v = id.clone();
        (0..t)
            .map(|_| {
                let digit = (&v % r).to_u64().expect("digit fits");
                v /= r;
                unzigzag(digit)
            })
            .collect()
    }

    fn point_code(&self, x: &[u32], color: Option<u32>) -> BigUint {
        let mut v = BigUint::zero();
        for &c in x.iter().rev() {
            v = v * self.delta + (c - 1);
        }
        v * self.ncol + color.unwrap_or(0)
    }

    fn decode_point(&self, code: &BigUint) -> (Vec<u32>, Option<u32>) {
        let color = (code % self.ncol).to_u32().expect("color fits");
        let mut v = code / self.ncol;
        let x = (0..self.d)
            .map(|_| {
                let digit = (&v % self.delta).to_u32().expect("digit fits");
                v /= self.delta;
                digit + 1
            })
            .collect();
        (x, (self.ncol > 1 || color > 0).then_some(color))
    }

    fn pair_id(&self, cell: &ItemId, code: &BigUint) -> ItemId {
        ItemId::new(cell.value() * &self.point_space + code)
    }

    fn split_pair(&self, pair: &ItemId) -> (BigUint, BigUint) {
        (pair.value() / &self.point_space, pair.value() % &self.point_space)
    }

    fn color_cell_id(&self, cell: &ItemId, color: u32) -> ItemId {
        ItemId::new(cell.value() * self.ncol + color)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ExactCell {
    count: u64,
    colors: BTreeMap<u32, u64>,
    items: BTreeMap<(Vec<u32>, Option<u32>), u64>,
}

#[derive(Debug, Clone, PartialEq)]
struct SketchLevel {
    cells: SparseRecovery,
    color_cells: Option<SparseRecovery>,
    sampler: TwoLevelSampler,
}

#[derive(Debug, Clone, PartialEq)]
enum LevelStore {
    Exact(BTreeMap<Vec<i64>, ExactCell>),
    Sketch(SketchLevel),
}

#[derive(Debug, Clone, PartialEq)]
struct Level {
    side: f64,
    failed: bool,
    store: LevelStore,
}

#[derive(Debug, Clone)]
pub struct StreamState {
    config: StreamConfig,
    map: GaussianMap,
    budget: u64,
    codec: Codec,
    fp: Fingerprinter,
    levels: Vec<Level>,
    live: BTreeMap<(Vec<u32>, Option<u32>), u64>,
    updates: u64,
    words_written: u64,
}

/// Samples the Gaussian map once (scaled for k-center) and builds zeroed
/// sketches for every guess level.
pub fn init_stream(config: StreamConfig) -> Result<StreamState> {
    config.validate()?;
    let raw = sample_map(config.d, config.t, config.seed)?;
    let map = scaled_for_kcenter(&raw, config.alpha, config.c0)?;
    StreamState::with_map(config, map)
}

/// Ladder top `J = ceil(log2(scale * c0 * sqrt(d) * Δ * sqrt(d))) + 1`.
pub fn ladder_top(scale: f64, c0: f64, d: usize, delta: u32) -> usize {
    let sd = (d as f64).sqrt();
    let x = scale * c0 * sd * delta as f64 * sd;
    (x.log2().ceil().max(0.0) as usize) + 1
}

impl StreamState {
    /// Builds a state around a given map (e.g. the identity, to bypass the
    /// projection in fixtures). `config.t` must equal the map's target
    /// dimension.
    pub fn with_map(config: StreamConfig, map: GaussianMap) -> Result<Self> {
        config.validate()?;
        if map.source_dim() != config.d || map.target_dim() != config.t {
            return Err(Error::DimensionMismatch {
                expected: config.t,
                got: map.target_dim(),
            });
        }
        let top = ladder_top(map.scale(), config.c0, config.d, config.delta);
        let max_row = (0..config.t)
            .map(|i| crate::geometry::norm(map.row(i)))
            .fold(0.0, f64::max);
        let coord_bound = max_row * map.scale() * config.delta as f64 * (config.d as f64).sqrt();
        let ncol = config.num_colors.unwrap_or(1);
        let sqrt_t = (config.t as f64).sqrt();
        let budget = config.budget();
        let mut rng = seeded(crate::rng::derive_seed(config.seed, 0x5ce7c4));
        let fp = Fingerprinter::new(&mut rng);
        let mut radix = Vec::new();
        let mut levels = Vec::new();
        for j in 0..=top {
            let side = config.eps * 2f64.powi(j as i32) / sqrt_t;
            let m = (coord_bound / side).floor() as u64 + 1;
            radix.push(BigUint::from(2 * m + 2));
            let store = match config.mode {
                StreamMode::ExactSim => LevelStore::Exact(BTreeMap::new()),
                StreamMode::Sketch => {
                    let width = budget.saturating_mul(2);
                    LevelStore::Sketch(SketchLevel {
                        cells: SparseRecovery::new(width, &mut rng),
                        color_cells: config.num_colors.map(|_| SparseRecovery::new(width, &mut rng)),
                        sampler: TwoLevelSampler::new(width, SAMPLER_REPS, &mut rng),
                    })
                }
            };
            levels.push(Level {
                side,
                failed: false,
                store,
            });
        }
        let codec = Codec {
            d: config.d,
            delta: config.delta,
            ncol,
            radix,
            point_space: BigUint::from(config.delta).pow(config.d as u32) * ncol,
        };
        Ok(StreamState {
            config,
            map,
            budget,
            codec,
            fp,
            levels,
            live: BTreeMap::new(),
            updates: 0,
            words_written: 0,
        })
    }

    pub fn config(&self) -> &StreamConfig {
        &self.config
    }

    pub fn map(&self) -> &GaussianMap {
        &self.map
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Highest guess level `J`; levels are `0..=J`.
    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn cell_side(&self, level: usize) -> f64 {
        self.levels[level].side
    }

    pub fn is_failed(&self, level: usize) -> bool {
        self.levels[level].failed
    }

    pub fn updates_processed(&self) -> u64 {
        self.updates
    }

    /// Projection of an original point under the stream's map.
    pub fn project(&self, point: &[u32]) -> Vec<f64> {
        let x: Vec<f64> = point.iter().map(|&c| c as f64).collect();
        self.map.apply_vec(&x)
    }

    pub fn grid_key(&self, level: usize, projected: &[f64]) -> GridKey {
        let side = self.levels[level].side;
        GridKey {
            guess_level: level,
            cell: projected.iter().map(|&y| (y / side).floor() as i64).collect(),
        }
    }

    /// Geometric center of a cell, in projected coordinates.
    pub fn cell_center(&self, key: &GridKey) -> Vec<f64> {
        let side = self.levels[key.guess_level].side;
        key.cell.iter().map(|&c| (c as f64 + 0.5) * side).collect()
    }

    /// True when every sketch field (all levels, failure flags, and in
    /// exact mode the live multiset) matches; monotone counters are ignored.
    pub fn sketch_eq(&self, other: &StreamState) -> bool {
        self.levels == other.levels && self.live == other.live
    }

    fn check_update(&self, u: &StreamUpdate) -> Result<()> {
        if u.point.len() != self.config.d {
            return Err(Error::DimensionMismatch {
                expected: self.config.d,
                got: u.point.len(),
            });
        }
        if let Some(&v) = u.point.iter().find(|&&v| v < 1 || v > self.config.delta) {
            return Err(Error::CoordinateOutOfRange {
                value: v as i64,
                delta: self.config.delta,
            });
        }
        match (u.color, self.config.num_colors) {
            (Some(c), Some(n)) if c >= n => Err(Error::invalid("color", format!("{c} >= num_colors={n}"))),
            (Some(_), None) => Err(Error::invalid("color", "stream declares no colors")),
            _ => Ok(()),
        }
    }

    /// Applies one insertion or deletion to every guess level.
    pub fn process_update(&mut self, u: &StreamUpdate) -> Result<()> {
        self.check_update(u)?;
        let item = (u.point.clone(), u.color);
        let delta = u.delta();
        if self.config.mode == StreamMode::ExactSim {
            let present = self.live.get(&item).copied().unwrap_or(0);
            if delta < 0 && present == 0 {
                return Err(Error::PhantomDelete(u.point.clone()));
            }
            if delta < 0 {
                if present == 1 {
                    self.live.remove(&item);
                } else {
                    self.live.insert(item.clone(), present - 1);
                }
            } else {
                *self.live.entry(item.clone()).or_insert(0) += 1;
            }
        }
        let projected = self.project(&u.point);
        let code = self.codec.point_code(&u.point, u.color);
        for j in 0..self.levels.len() {
            let key = self.grid_key(j, &projected);
            let budget = self.budget;
            let level = &mut self.levels[j];
            match &mut level.store {
                LevelStore::Exact(cells) => {
                    if level.failed {
                        continue;
                    }
                    let cell = cells.entry(key.cell.clone()).or_default();
                    bump(&mut cell.count, delta);
                    if let Some(c) = u.color {
                        bump_map(&mut cell.colors, c, delta);
                    }
                    bump_map(&mut cell.items, item.clone(), delta);
                    if cell.count == 0 {
                        cells.remove(&key.cell);
                    }
                    self.words_written += 1;
                    if cells.len() as u64 > budget {
                        level.failed = true;
                        cells.clear();
                    }
                }
                LevelStore::Sketch(s) => {
                    let cell_id = self.codec.cell_id(j, &key.cell);
                    let cell_fp = self.fp.term(&cell_id);
                    self.words_written += s.cells.update(&cell_id, cell_fp, delta);
                    if let (Some(cc), Some(c)) = (s.color_cells.as_mut(), u.color) {
                        let id = self.codec.color_cell_id(&cell_id, c);
                        self.words_written += cc.update(&id, self.fp.term(&id), delta);
                    }
                    let pair = self.codec.pair_id(&cell_id, &code);
                    let pair_fp = self.fp.term(&pair);
                    self.words_written += s.sampler.update(&cell_id, cell_fp, &pair, pair_fp, delta);
                }
            }
        }
        self.updates += 1;
        Ok(())
    }

    pub fn process_all<'a>(&mut self, updates: impl IntoIterator<Item = &'a StreamUpdate>) -> Result<()> {
        updates.into_iter().try_for_each(|u| self.process_update(u))
    }
}

fn bump(x: &mut u64, delta: i64) {
    *x = x.checked_add_signed(delta).expect("exact-sim counts stay non-negative");
}

fn bump_map<K: Ord>(m: &mut BTreeMap<K, u64>, key: K, delta: i64) {
    match m.entry(key) {
        Entry::Occupied(mut e) => {
            bump(e.get_mut(), delta);
            if *e.get() == 0 {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            let mut x = 0;
            bump(&mut x, delta);
            e.insert(x);
        }
    }
}

/// Parses the stream text format: a header `d Δ n_hint`, then one update
/// per line, `+` or `-` followed by `d` integers and an optional `c=<color>`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_stream(text: &str) -> Result<(usize, u32, Vec<StreamUpdate>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 {
        return Err(perr(hl, "header must be `d delta n_hint`".into()));
    }
    let d: usize = h[0].parse().map_err(|e| perr(hl, format!("d: {e}")))?;
    let delta: u32 = h[1].parse().map_err(|e| perr(hl, format!("delta: {e}")))?;
    let hint: usize = h[2].parse().map_err(|e| perr(hl, format!("n_hint: {e}")))?;
    let mut out = Vec::with_capacity(hint.min(1 << 20));
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let op = match toks.next() {
            Some("+") => Op::Insert,
            Some("-") => Op::Delete,
            other => return Err(perr(ln, format!("expected + or -, got {other:?}"))),
        };
        let mut point = Vec::with_capacity(d);
        let mut color = None;
        for tok in toks {
            if let Some(c) = tok.strip_prefix("c=") {
                color = Some(c.parse().map_err(|e| perr(ln, format!("color: {e}")))?);
            } else if color.is_some() {
                return Err(perr(ln, "coordinates after color".into()));
            } else {
                point.push(tok.parse().map_err(|e| perr(ln, format!("coordinate: {e}")))?);
            }
        }
        if point.len() != d {
            return Err(perr(ln, format!("expected {d} coordinates, got {}", point.len())));
        }
        out.push(StreamUpdate { op, point, color });
    }
    Ok((d, delta, out))
}

pub fn write_stream(d: usize, delta: u32, updates: &[StreamUpdate]) -> String {
    let mut s = format!("{d} {delta} {}\n", updates.len());
    for u in updates {
        s.push(if u.op == Op::Insert { '+' } else { '-' });
        for c in &u.point {
            s.push_str(&format!(" {c}"));
        }
        if let Some(c) = u.color {
            s.push_str(&format!(" c={c}"));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(mode: StreamMode) -> StreamConfig {
        let mut c = StreamConfig::new(4, 2, 64, 2);
        c.mode = mode;
        c.seed = 9;
        c
    }

    #[test]
    fn ladder_example() {
        let scale = 2.0 / (3.0 * 32f64.sqrt());
        assert_eq!(ladder_top(scale, 3.0, 32, 1024), 15);
    }

    #[test]
    fn config_guards() {
        let mut c = cfg(StreamMode::ExactSim);
        c.t = 5;
        assert!(init_stream(c.clone()).is_err());
        c.t = 2;
        c.eps = 1.0;
        assert!(init_stream(c.clone()).is_err());
        c.eps = 0.5;
        c.delta = 1;
        assert!(init_stream(c).is_err());
    }

    #[test]
    fn budget_arithmetic() {
        let mut c = StreamConfig::new(8, 3, 1024, 3);
        c.eps = 0.5;
        assert_eq!(c.budget(), 4 * 16 * 16 * 16);
        c.t = 8;
        c.eps = 0.01;
        assert_eq!(c.budget(), u64::MAX);
    }

    #[test]
    fn codec_roundtrip() {
        let mut c = cfg(StreamMode::Sketch);
        c.num_colors = Some(3);
        let s = init_stream(c).unwrap();
        let cell = vec![-3, 7];
        let id = s.codec.cell_id(1, &cell);
        assert_eq!(s.codec.decode_cell(1, id.value(), 2), cell);
        let code = s.codec.point_code(&[1, 64, 5, 2], Some(2));
        assert_eq!(s.codec.decode_point(&code), (vec![1, 64, 5, 2], Some(2)));
        let pair = s.codec.pair_id(&id, &code);
        assert_eq!(s.codec.split_pair(&pair), (id.value().clone(), code));
        for z in [-5i64, -1, 0, 1, 9] {
            assert_eq!(unzigzag(zigzag(z)), z);
        }
    }

    #[test]
    fn rejects_bad_updates() {
        let mut s = init_stream(cfg(StreamMode::ExactSim)).unwrap();
        assert!(s.process_update(&StreamUpdate::insert(vec![0, 1, 1, 1])).is_err());
        assert!(s.process_update(&StreamUpdate::insert(vec![1, 1, 1])).is_err());
        assert!(s.process_update(&StreamUpdate::insert(vec![1, 1, 1, 1]).with_color(0)).is_err());
        assert_eq!(
            s.process_update(&StreamUpdate::delete(vec![1, 1, 1, 1])),
            Err(Error::PhantomDelete(vec![1, 1, 1, 1]))
        );
        // sketch mode cannot tell
        let mut s = init_stream(cfg(StreamMode::Sketch)).unwrap();
        assert!(s.process_update(&StreamUpdate::delete(vec![1, 1, 1, 1])).is_ok());
    }

    #[test]
    fn insert_delete_restores_state() {
        for mode in [StreamMode::ExactSim, StreamMode::Sketch] {
            let mut s = init_stream(cfg(mode)).unwrap();
            s.process_update(&StreamUpdate::insert(vec![3, 4, 5, 6])).unwrap();
            let before = s.clone();
            s.process_update(&StreamUpdate::insert(vec![9, 9, 1, 60])).unwrap();
            assert!(!s.sketch_eq(&before));
            s.process_update(&StreamUpdate::delete(vec![9, 9, 1, 60])).unwrap();
            assert!(s.sketch_eq(&before));
            assert_eq!(s.updates_processed(), 3);
        }
    }

    #[test]
    fn repeated_point_single_cell() {
        let mut s = init_stream(cfg(StreamMode::ExactSim)).unwrap();
        for _ in 0..50 {
            s.process_update(&StreamUpdate::insert(vec![7, 7, 7, 7])).unwrap();
        }
        for level in &s.levels {
            let LevelStore::Exact(cells) = &level.store else { unreachable!() };
            assert_eq!(cells.len(), 1);
            assert_eq!(cells.values().next().unwrap().count, 50);
        }
    }

    #[test]
    fn parse_and_write() {
        let text = "2 16 3\n+ 1 2\n# note\n- 1 2 c=1\n\n+ 16 16\n";
        let (d, delta, ups) = parse_stream(text).unwrap();
        assert_eq!((d, delta, ups.len()), (2, 16, 3));
        assert_eq!(ups[1], StreamUpdate::delete(vec![1, 2]).with_color(1));
        assert_eq!(parse_stream(&write_stream(d, delta, &ups)).unwrap().2, ups);
        assert!(parse_stream("2 16 1\n* 1 2\n").is_err());
        assert!(parse_stream("2 16 1\n+ 1\n").is_err());
        assert!(parse_stream("").is_err());
    }

    proptest! {
        #[test]
        fn grid_displacement_bound(x in proptest::collection::vec(1u32..=64, 4), j in 0usize..6) {
            let s = init_stream(cfg(StreamMode::ExactSim)).unwrap();
            let y = s.project(&x);
            let key = s.grid_key(j, &y);
            let c = s.cell_center(&key);
            let moved = crate::geometry::dist(&y, &c);
            prop_assert!(moved <= s.config.eps * 2f64.powi(j as i32) / 2.0 + 1e-9);
        }
    }
}
