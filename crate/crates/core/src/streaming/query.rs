use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GridKey, LevelStore, StreamMode, StreamState};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::rng::seeded;
use crate::solvers::{
    anchored_search, exact_constrained, exact_discrete_outliers, gonzalez, outliers_cost, peel_witness,
    AssignmentConstraint,
};

/// Result of a streaming query. `value` includes the grid slack
/// `eps * 2^level` whenever the solved value on the cells is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamAnswer {
    pub value: f64,
    pub level: usize,
    pub slack: f64,
    pub centers: Vec<Vec<u32>>,
    pub cells: usize,
    pub total_weight: u64,
    /// Solver used on the cells: `gonzalez`, `exact`, `peel-witness`,
    /// `anchored-gonzalez` (budget fallbacks) or `vanilla` (vacuous case).
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledPoint {
    pub key: GridKey,
    pub point: Vec<u32>,
    pub color: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSpace {
    pub level: usize,
    pub side: f64,
    pub failed: bool,
    /// Exact mode: nonempty cells. Sketch mode: allocated cell-table buckets.
    pub entries: usize,
    pub words: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub mode: StreamMode,
    pub words_stored: u64,
    pub bits_estimate: u64,
    pub map_words: u64,
    pub words_written: u64,
    pub per_level_overhead: u64,
    pub per_level: Vec<LevelSpace>,
}

#[derive(Debug, Clone)]
struct CellRecord {
    cell: Vec<i64>,
    count: u64,
    colors: BTreeMap<u32, u64>,
}

fn words_for_bits(bits: u64) -> u64 {
    bits.div_ceil(64).max(1)
}

impl StreamState {
    fn slack(&self, level: usize) -> f64 {
        self.config.eps * 2f64.powi(level as i32)
    }

    /// Cells of a level sorted by coordinates, or None if the level failed.
    fn level_cells(&self, j: usize) -> Option<Vec<CellRecord>> {
        let level = &self.levels[j];
        if level.failed {
            return None;
        }
        match &level.store {
            LevelStore::Exact(cells) => Some(
                cells
                    .iter()
                    .map(|(c, e)| CellRecord {
                        cell: c.clone(),
                        count: e.count,
                        colors: e.colors.clone(),
                    })
                    .collect(),
            ),
            LevelStore::Sketch(s) => {
                let decoded = s.cells.decode(&self.fp, self.budget)?;
                let mut out: BTreeMap<Vec<i64>, CellRecord> = BTreeMap::new();
                for (id, w) in &decoded {
                    let cell = self.codec.decode_cell(j, id.value(), self.config.t);
                    out.insert(
                        cell.clone(),
                        CellRecord {
                            cell,
                            count: *w as u64,
                            colors: BTreeMap::new(),
                        },
                    );
                }
                if let Some(cc) = &s.color_cells {
                    let ncol = BigUint::from(self.codec.ncol);
                    for (id, w) in cc.decode(&self.fp, self.budget.saturating_mul(self.codec.ncol as u64))? {
                        let color = u32::try_from(id.value() % &ncol).ok()?;
                        let cell = self.codec.decode_cell(j, &(id.value() / &ncol), self.config.t);
                        out.get_mut(&cell)?.colors.insert(color, w as u64);
                    }
                }
                Some(out.into_values().collect())
            }
        }
    }

    /// Smallest non-failed level and its cells.
    fn select_level(&self) -> Result<(usize, Vec<CellRecord>)> {
        for j in 0..self.levels.len() {
            if let Some(cells) = self.level_cells(j) {
                if cells.is_empty() {
                    return Err(Error::EmptyStream);
                }
                return Ok((j, cells));
            }
        }
        Err(Error::AllLevelsFailed)
    }

    fn cell_set(&self, j: usize, cells: &[CellRecord]) -> PointSet {
        let mut set = PointSet::empty(self.config.t);
        for c in cells {
            let center = self.cell_center(&GridKey {
                guess_level: j,
                cell: c.cell.clone(),
            });
            set.push(center, c.count, None).expect("finite cell center");
        }
        set
    }

    /// One cell entry per (cell, color) present, tagged with its cell index.
    fn colored_cell_set(&self, j: usize, cells: &[CellRecord]) -> Result<(PointSet, Vec<usize>)> {
        let mut set = PointSet::empty(self.config.t);
        let mut owner = Vec::new();
        for (i, c) in cells.iter().enumerate() {
            let colored: u64 = c.colors.values().sum();
            if colored != c.count {
                return Err(Error::invalid("colors", "fair query needs every update colored"));
            }
            let center = self.cell_center(&GridKey {
                guess_level: j,
                cell: c.cell.clone(),
            });
            for (&col, &w) in &c.colors {
                set.push(center.clone(), w, Some(col))?;
                owner.push(i);
            }
        }
        Ok((set, owner))
    }

    /// An original point stored in the given cell.
    fn representative(&self, j: usize, cell: &[i64]) -> Result<Vec<u32>> {
        match &self.levels[j].store {
            LevelStore::Exact(cells) => cells
                .get(cell)
                .and_then(|e| e.items.keys().next())
                .map(|(p, _)| p.clone())
                .ok_or(Error::SamplerDecodeFailed(j)),
            LevelStore::Sketch(s) => {
                let cell_id = self.codec.cell_id(j, cell);
                let pair = s.sampler.pair_in(&cell_id, &self.fp).ok_or(Error::SamplerDecodeFailed(j))?;
                let (c, code) = self.codec.split_pair(&pair);
                if &c != cell_id.value() {
                    return Err(Error::SamplerDecodeFailed(j));
                }
                Ok(self.codec.decode_point(&code).0)
            }
        }
    }

    fn answer(
        &self,
        j: usize,
        cells: &[CellRecord],
        solved: f64,
        center_cells: &[usize],
        method: &str,
    ) -> Result<StreamAnswer> {
        let slack = if solved > 0.0 { self.slack(j) } else { 0.0 };
        let centers = center_cells
            .iter()
            .map(|&i| self.representative(j, &cells[i].cell))
            .collect::<Result<Vec<_>>>()?;
        Ok(StreamAnswer {
            value: solved + slack,
            level: j,
            slack,
            centers,
            cells: cells.len(),
            total_weight: cells.iter().map(|c| c.count).sum(),
            method: method.to_string(),
        })
    }

    /// Vanilla k-center estimate: Gonzalez on the cell centers of the
    /// selected level, plus grid slack; centers are recovered input points.
    pub fn query_vanilla(&self) -> Result<StreamAnswer> {
        let (j, cells) = self.select_level()?;
        let set = self.cell_set(j, &cells);
        let (_, sol) = gonzalez(&set, self.config.k, 0)?;
        self.answer(j, &cells, sol.value, &sol.center_indices, "gonzalez")
    }

    /// k-center with `z` outliers on the weighted cells. Uses the exact
    /// oracle when it fits its budget, otherwise the peeling witness.
    pub fn query_outliers(&self, z: u64) -> Result<StreamAnswer> {
        if z == 0 {
            return self.query_vanilla();
        }
        let (j, cells) = self.select_level()?;
        let set = self.cell_set(j, &cells);
        let k = self.config.k;
        match exact_discrete_outliers(&set, k, z) {
            Ok(sol) => self.answer(j, &cells, sol.value, &sol.center_indices, "exact"),
            Err(Error::OracleBudgetExceeded { .. }) => {
                let witness = peel_witness(&set, k, z)?;
                let wsol = exact_discrete_outliers(&witness, k, z)?;
                let centers: Vec<usize> = wsol
                    .center_indices
                    .iter()
                    .map(|&w| {
                        (0..set.len())
                            .find(|&i| set.point(i) == witness.point(w))
                            .expect("witness points come from the cell set")
                    })
                    .collect();
                let value = outliers_cost(&set, &centers, z);
                self.answer(j, &cells, value, &centers, "peel-witness")
            }
            Err(e) => Err(e),
        }
    }

    /// Constrained k-center on the weighted (and colored) cells: anchored
    /// exact search when it fits the oracle budget, otherwise anchored search
    /// restricted to Gonzalez centers. Vacuous constraints reduce to
    /// [`StreamState::query_vanilla`].
    pub fn query_constrained(&self, constraint: &AssignmentConstraint) -> Result<StreamAnswer> {
        let (j, cells) = self.select_level()?;
        let total: u64 = cells.iter().map(|c| c.count).sum();
        if constraint.is_vacuous(total) {
            let mut a = self.query_vanilla()?;
            a.method = "vanilla".into();
            return Ok(a);
        }
        let (set, owner) = match constraint {
            AssignmentConstraint::Capacitated { .. } => (self.cell_set(j, &cells), (0..cells.len()).collect()),
            AssignmentConstraint::Fair { .. } => {
                if self.config.num_colors.is_none() {
                    return Err(Error::invalid("colors", "fair query needs a stream with declared colors"));
                }
                self.colored_cell_set(j, &cells)?
            }
        };
        let k = self.config.k;
        let (value, anchors, method) = match exact_constrained(&set, k, constraint) {
            Ok(sol) => (sol.value, sol.anchors, "exact"),
            Err(Error::OracleBudgetExceeded { .. }) => {
                let (_, g) = gonzalez(&set, k, 0)?;
                let v = anchored_search(&set, &g.center_indices, constraint)?;
                (v, g.center_indices, "anchored-gonzalez")
            }
            Err(e) => return Err(e),
        };
        let mut center_cells: Vec<usize> = anchors.iter().map(|&a| owner[a]).collect();
        center_cells.dedup();
        self.answer(j, &cells, value, &center_cells, method)
    }

    /// Draws a (cell, original point) pair from a level. Sketch mode uses the
    /// level's two-level sampler (deterministic given the sketch; `seed` is
    /// unused); exact mode draws uniformly over stored pairs with `seed`.
    /// `Ok(None)` means the level holds nothing.
    pub fn sample_point(&self, level: usize, seed: u64) -> Result<Option<SampledPoint>> {
        let lv = self
            .levels
            .get(level)
            .ok_or_else(|| Error::invalid("level", format!("{level} > {}", self.top_level())))?;
        match &lv.store {
            LevelStore::Exact(cells) => {
                if lv.failed {
                    return Err(Error::SamplerDecodeFailed(level));
                }
                let pairs: Vec<(&Vec<i64>, &(Vec<u32>, Option<u32>))> =
                    cells.iter().flat_map(|(c, e)| e.items.keys().map(move |it| (c, it))).collect();
                if pairs.is_empty() {
                    return Ok(None);
                }
                let pick = seeded(seed).random_range(0..pairs.len());
                let (cell, (point, color)) = pairs[pick];
                Ok(Some(SampledPoint {
                    key: GridKey {
                        guess_level: level,
                        cell: cell.clone(),
                    },
                    point: point.clone(),
                    color: *color,
                }))
            }
            LevelStore::Sketch(s) => match s.sampler.sample(&self.fp) {
                None => Err(Error::SamplerDecodeFailed(level)),
                Some(super::SampleVerdict::Empty) => Ok(None),
                Some(super::SampleVerdict::Item { cell, pair }) => {
                    let (_, code) = self.codec.split_pair(&pair);
                    let (point, color) = self.codec.decode_point(&code);
                    Ok(Some(SampledPoint {
                        key: GridKey {
                            guess_level: level,
                            cell: self.codec.decode_cell(level, cell.value(), self.config.t),
                        },
                        point,
                        color: if self.config.num_colors.is_some() { color.or(Some(0)) } else { None },
                    }))
                }
            },
        }
    }

    /// Machine words held by the level structures. Every stored entry is
    /// charged a fixed width, so storage depends on how many distinct
    /// entries exist, not on their multiplicities.
    pub fn space_report(&self) -> SpaceReport {
        let t = self.config.t as u64;
        let d = self.config.d as u64;
        let top = self.levels.len() - 1;
        let radix_bits = self.codec.radix[0].bits();
        let cell_id_words = words_for_bits(radix_bits * t + 64);
        let pair_id_words = words_for_bits(radix_bits * t + self.codec.point_space.bits() + 64);
        // weight + fingerprint + bucket key + id sum
        let osr = |id_words: u64| 3 + id_words;
        let overhead = match self.config.mode {
            StreamMode::ExactSim => 3,
            // 3 rows x 2 hash words (x2 with colors), per sampler rep 6 hash
            // pairs, plus side, failed flag and width
            StreamMode::Sketch => {
                let colors = if self.config.num_colors.is_some() { 6 } else { 0 };
                6 + colors + super::SAMPLER_REPS as u64 * 12 + 3
            }
        };
        let mut per_level = Vec::with_capacity(top + 1);
        for (j, lv) in self.levels.iter().enumerate() {
            let (entries, words) = match &lv.store {
                LevelStore::Exact(cells) => {
                    let w: u64 = cells
                        .values()
                        .map(|e| t + 1 + 2 * e.colors.len() as u64 + (d + 2) * e.items.len() as u64)
                        .sum();
                    (cells.len(), w)
                }
                LevelStore::Sketch(s) => {
                    let mut w = s.cells.stored_buckets() as u64 * osr(cell_id_words);
                    if let Some(cc) = &s.color_cells {
                        w += cc.stored_buckets() as u64 * osr(cell_id_words);
                    }
                    let (outer, inner) = s.sampler.stored_buckets();
                    w += outer as u64 * osr(cell_id_words) + inner as u64 * osr(pair_id_words);
                    (s.cells.stored_buckets(), w)
                }
            };
            per_level.push(LevelSpace {
                level: j,
                side: lv.side,
                failed: lv.failed,
                entries,
                words: words + overhead,
            });
        }
        let words_stored: u64 = per_level.iter().map(|l| l.words).sum::<u64>();
        SpaceReport {
            mode: self.config.mode,
            words_stored,
            bits_estimate: words_stored * 64,
            map_words: d * t,
            words_written: self.words_written,
            per_level_overhead: overhead,
            per_level,
        }
    }
}
