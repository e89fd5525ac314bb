//! Linear sketch primitives over the Mersenne prime field 2^61 - 1.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

pub(crate) const P: u64 = (1 << 61) - 1;

pub(crate) fn mulmod(a: u64, b: u64) -> u64 {
    let p = (a as u128) * (b as u128);
    let s = (p as u64 & P) + (p >> 61) as u64;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

pub(crate) fn powmod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base);
        }
        base = mulmod(base, base);
        exp >>= 1;
    }
    acc
}

fn signed_mod(x: i64) -> u64 {
    let r = x.unsigned_abs() % P;
    if x < 0 && r != 0 {
        P - r
    } else {
        r
    }
}

/// `h(x) = a*x + b mod p`, pairwise independent over the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairwiseHash {
    a: u64,
    b: u64,
}

impl PairwiseHash {
    pub fn new<R: Rng>(rng: &mut R) -> Self {
        PairwiseHash {
            a: rng.random_range(1..P),
            b: rng.random_range(0..P),
        }
    }

    pub fn hash(&self, x: u64) -> u64 {
        addmod(mulmod(self.a, x), self.b)
    }

    fn depth(&self, x: u64, max: usize) -> usize {
        (self.hash(x).trailing_zeros() as usize).min(max)
    }
}

/// A non-negative integer identifier together with its residue mod p.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId {
    value: BigUint,
    modp: u64,
}

impl ItemId {
    pub fn new(value: BigUint) -> Self {
        let modp = (&value % P).to_u64().expect("residue fits");
        ItemId { value, modp }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modp(&self) -> u64 {
        self.modp
    }
}

/// Fingerprint term `r^(id mod p)`; nonlinear in the id so that mixtures of
/// several ids fail the single-item consistency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fingerprinter {
    base: u64,
}

impl Fingerprinter {
    pub fn new<R: Rng>(rng: &mut R) -> Self {
        Fingerprinter {
            base: rng.random_range(2..P),
        }
    }

    pub fn term(&self, id: &ItemId) -> u64 {
        powmod(self.base, id.modp)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OneSparseRecovery {
    weight: i64,
    weighted_id_sum: BigInt,
    fingerprint: u64,
}

impl OneSparseRecovery {
    pub fn update(&mut self, id: &ItemId, fp_term: u64, delta: i64) {
        self.weight += delta;
        let scaled = BigInt::from_biguint(Sign::Plus, id.value.clone()) * delta;
        self.weighted_id_sum += scaled;
        self.fingerprint = addmod(self.fingerprint, mulmod(signed_mod(delta), fp_term));
    }

    pub fn is_zero(&self) -> bool {
        self.weight == 0 && self.weighted_id_sum.is_zero() && self.fingerprint == 0
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// The single id held with positive weight, if the fields are consistent
    /// with exactly one.
    pub fn decode(&self, fp: &Fingerprinter) -> Option<(ItemId, i64)> {
        if self.weight <= 0 || self.weighted_id_sum.is_negative() {
            return None;
        }
        let (q, r) = self.weighted_id_sum.div_rem(&BigInt::from(self.weight));
        if !r.is_zero() {
            return None;
        }
        let id = ItemId::new(q.to_biguint()?);
        (self.fingerprint == mulmod(signed_mod(self.weight), fp.term(&id))).then_some((id, self.weight))
    }
}

/// Invertible lookup table: three hashed rows of [`OneSparseRecovery`]
/// buckets, decoded by peeling. Buckets are allocated lazily and dropped
/// when they return to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRecovery {
    width: u64,
    hashes: [PairwiseHash; 3],
    rows: [HashMap<u64, OneSparseRecovery>; 3],
}

impl SparseRecovery {
    pub fn new<R: Rng>(width: u64, rng: &mut R) -> Self {
        SparseRecovery {
            width: width.max(1),
            hashes: [PairwiseHash::new(rng), PairwiseHash::new(rng), PairwiseHash::new(rng)],
            rows: Default::default(),
        }
    }

    fn bucket(&self, row: usize, id: &ItemId) -> u64 {
        self.hashes[row].hash(id.modp) % self.width
    }

    /// Returns the number of buckets written.
    pub fn update(&mut self, id: &ItemId, fp_term: u64, delta: i64) -> u64 {
        for r in 0..3 {
            let b = self.bucket(r, id);
            apply(&mut self.rows[r], b, id, fp_term, delta);
        }
        3
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(HashMap::is_empty)
    }

    pub fn stored_buckets(&self) -> usize {
        self.rows.iter().map(HashMap::len).sum()
    }

    /// Recovers the full support with multiplicities, or None when peeling
    /// gets stuck, some weight is non-positive, or more than `limit` ids
    /// are present.
    pub fn decode(&self, fp: &Fingerprinter, limit: u64) -> Option<BTreeMap<ItemId, i64>> {
        let mut rows = self.rows.clone();
        let mut out = BTreeMap::new();
        let mut queue: Vec<(usize, u64)> = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            queue.extend(row.keys().map(|&b| (r, b)));
        }
        while let Some((r, b)) = queue.pop() {
            let Some(cell) = rows[r].get(&b) else {
                continue;
            };
            let Some((id, w)) = cell.decode(fp) else {
                continue;
            };
            if self.bucket(r, &id) != b {
                continue;
            }
            let term = fp.term(&id);
            for rr in 0..3 {
                let bb = self.bucket(rr, &id);
                apply(&mut rows[rr], bb, &id, term, -w);
                if rows[rr].contains_key(&bb) {
                    queue.push((rr, bb));
                }
            }
            *out.entry(id).or_insert(0) += w;
            if out.len() as u64 > limit {
                return None;
            }
        }
        if rows.iter().any(|row| !row.is_empty()) {
            return None;
        }
        out.retain(|_, w| *w != 0);
        if out.values().any(|&w| w < 0) {
            return None;
        }
        Some(out)
    }
}

fn apply(row: &mut HashMap<u64, OneSparseRecovery>, b: u64, id: &ItemId, fp_term: u64, delta: i64) {
    let cell = row.entry(b).or_default();
    cell.update(id, fp_term, delta);
    if cell.is_zero() {
        row.remove(&b);
    }
}

/// Geometric subsampling of ids into levels `0..=max_depth` (an id lives in
/// levels `0..=depth(id)`), each level a hashed bank of buckets.
#[derive(Debug, Clone, PartialEq)]
struct SubsampleHashes {
    depth: PairwiseHash,
    bucket: PairwiseHash,
    select: PairwiseHash,
    width: u64,
    max_depth: usize,
}

impl SubsampleHashes {
    fn new<R: Rng>(width: u64, max_depth: usize, rng: &mut R) -> Self {
        SubsampleHashes {
            depth: PairwiseHash::new(rng),
            bucket: PairwiseHash::new(rng),
            select: PairwiseHash::new(rng),
            width: width.max(1),
            max_depth,
        }
    }

    fn keys(&self, id: &ItemId) -> impl Iterator<Item = (u8, u64)> {
        let b = self.bucket.hash(id.modp) % self.width;
        (0..=self.depth.depth(id.modp, self.max_depth)).map(move |l| (l as u8, b))
    }
}

const MAX_DEPTH: usize = 40;
const INNER_WIDTH: u64 = 16;

#[derive(Debug, Clone, Default, PartialEq)]
struct OuterBucket {
    cell: OneSparseRecovery,
    inner: BTreeMap<(u8, u64), OneSparseRecovery>,
}

#[derive(Debug, Clone, PartialEq)]
struct SamplerRep {
    outer_h: SubsampleHashes,
    inner_h: SubsampleHashes,
    outer: HashMap<(u8, u64), OuterBucket>,
}

/// Picks, among the deepest subsampling level whose nonempty buckets all
/// decode, the id with the smallest selection hash.
fn select_from<'a, V: 'a>(
    entries: impl Iterator<Item = (&'a (u8, u64), &'a V)>,
    decode: impl Fn(&V) -> Option<ItemId>,
    h: &SubsampleHashes,
) -> Option<(u8, u64, ItemId)> {
    let mut by_level: BTreeMap<u8, Vec<(u64, &V)>> = BTreeMap::new();
    for (&(l, b), v) in entries {
        by_level.entry(l).or_default().push((b, v));
    }
    for (&l, bucket_list) in by_level.iter().rev() {
        let decoded: Option<Vec<(u64, ItemId)>> = bucket_list.iter().map(|(b, v)| decode(v).map(|id| (*b, id))).collect();
        if let Some(ids) = decoded {
            if let Some((b, id)) = ids.into_iter().min_by_key(|(_, id)| (h.select.hash(id.modp), id.clone())) {
                return Some((l, b, id));
            }
        }
    }
    None
}

impl SamplerRep {
    fn new<R: Rng>(outer_width: u64, rng: &mut R) -> Self {
        SamplerRep {
            outer_h: SubsampleHashes::new(outer_width, MAX_DEPTH, rng),
            inner_h: SubsampleHashes::new(INNER_WIDTH, MAX_DEPTH, rng),
            outer: HashMap::new(),
        }
    }

    fn update(&mut self, cell: &ItemId, cell_fp: u64, pair: &ItemId, pair_fp: u64, delta: i64) -> u64 {
        let mut written = 0;
        let inner_keys: Vec<(u8, u64)> = self.inner_h.keys(pair).collect();
        for key in self.outer_h.keys(cell) {
            let bucket = self.outer.entry(key).or_default();
            bucket.cell.update(cell, cell_fp, delta);
            written += 1;
            for &ik in &inner_keys {
                let e = bucket.inner.entry(ik).or_default();
                e.update(pair, pair_fp, delta);
                if e.is_zero() {
                    bucket.inner.remove(&ik);
                }
                written += 1;
            }
            if bucket.cell.is_zero() && bucket.inner.is_empty() {
                self.outer.remove(&key);
            }
        }
        written
    }

    fn inner_sample(&self, bucket: &OuterBucket, fp: &Fingerprinter) -> Option<ItemId> {
        select_from(bucket.inner.iter(), |v| v.decode(fp).map(|x| x.0), &self.inner_h).map(|x| x.2)
    }

    fn sample(&self, fp: &Fingerprinter) -> Option<(ItemId, ItemId)> {
        let (l, b, cell) = select_from(self.outer.iter(), |v| v.cell.decode(fp).map(|x| x.0), &self.outer_h)?;
        let pair = self.inner_sample(&self.outer[&(l, b)], fp)?;
        Some((cell, pair))
    }

    fn pair_in(&self, cell: &ItemId, fp: &Fingerprinter) -> Option<ItemId> {
        let keys: Vec<(u8, u64)> = self.outer_h.keys(cell).collect();
        keys.iter().rev().find_map(|key| {
            let bucket = self.outer.get(key)?;
            match bucket.cell.decode(fp) {
                Some((id, _)) if id == *cell => self.inner_sample(bucket, fp),
                _ => None,
            }
        })
    }
}

/// Two-level l0-sampler: a nonempty cell is drawn by subsampling on the cell
/// id, then an item inside it by subsampling on the pair id. Each item is
/// an encoded (cell, original point) pair, so a successful draw reveals an
/// input point. Independent repetitions back each other up.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelSampler {
    reps: Vec<SamplerRep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleVerdict {
    Empty,
    Item { cell: ItemId, pair: ItemId },
}

impl TwoLevelSampler {
    pub fn new<R: Rng>(outer_width: u64, repetitions: usize, rng: &mut R) -> Self {
        TwoLevelSampler {
            reps: (0..repetitions.max(1)).map(|_| SamplerRep::new(outer_width, rng)).collect(),
        }
    }

    pub fn update(&mut self, cell: &ItemId, cell_fp: u64, pair: &ItemId, pair_fp: u64, delta: i64) -> u64 {
        self.reps.iter_mut().map(|r| r.update(cell, cell_fp, pair, pair_fp, delta)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.reps[0].outer.is_empty()
    }

    /// None when no repetition decodes.
    pub fn sample(&self, fp: &Fingerprinter) -> Option<SampleVerdict> {
        if self.is_empty() {
            return Some(SampleVerdict::Empty);
        }
        self.reps
            .iter()
            .find_map(|r| r.sample(fp))
            .map(|(cell, pair)| SampleVerdict::Item { cell, pair })
    }

    /// Some item stored under `cell`, if a repetition isolates that cell.
    pub fn pair_in(&self, cell: &ItemId, fp: &Fingerprinter) -> Option<ItemId> {
        self.reps.iter().find_map(|r| r.pair_in(cell, fp))
    }

    /// (outer buckets, inner buckets) currently allocated.
    pub fn stored_buckets(&self) -> (usize, usize) {
        let outer = self.reps.iter().map(|r| r.outer.len()).sum();
        let inner = self.reps.iter().flat_map(|r| r.outer.values()).map(|b| b.inner.len()).sum();
        (outer, inner)
    }
}
