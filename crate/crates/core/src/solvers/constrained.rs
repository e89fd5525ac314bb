//! k-center under assignment constraints (capacities, fairness).
//!
//! Partitions are reported per weight unit: entry `i` with multiplicity `m`
//! owns `m` consecutive slots, starting after the slots of entries `0..i`.
//! Slot values are cluster ids in `0..centers.len()`.

use serde::{Deserialize, Serialize};

use super::flow::BoundedFlow;
use super::{binomial, check_budget, for_each_multiset};
use crate::error::{Error, Result};
use crate::geometry::{dist, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AssignmentConstraint {
    /// No cluster holds more than `capacity` weight units.
    Capacitated { capacity: u64 },
    /// In every cluster, the share of each color's total weight lies in `[a, b]`.
    Fair { a: f64, b: f64, num_colors: u32 },
}

impl AssignmentConstraint {
    pub fn capacitated(capacity: u64) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid("capacity", "must be >= 1"));
        }
        Ok(AssignmentConstraint::Capacitated { capacity })
    }

    pub fn fair(a: f64, b: f64, num_colors: u32) -> Result<Self> {
        if !(0.0 <= a && a <= b && b <= 1.0) {
            return Err(Error::invalid("a/b", "need 0 <= a <= b <= 1"));
        }
        if num_colors == 0 {
            return Err(Error::invalid("num_colors", "must be >= 1"));
        }
        Ok(AssignmentConstraint::Fair { a, b, num_colors })
    }

    /// Integer bounds on how many units of a color with total weight `total`
    /// a single cluster may receive.
    pub fn fair_bounds(a: f64, b: f64, total: u64) -> (u64, u64) {
        let n = total as f64;
        let lo = (a * n - 1e-9).ceil().max(0.0) as u64;
        let hi = (b * n + 1e-9).floor().max(0.0) as u64;
        (lo, hi)
    }

    /// True when every assignment of `total_weight` units is feasible.
    pub fn is_vacuous(&self, total_weight: u64) -> bool {
        match *self {
            AssignmentConstraint::Capacitated { capacity } => capacity >= total_weight,
            AssignmentConstraint::Fair { a, b, .. } => a <= 0.0 && b >= 1.0,
        }
    }

    fn check_input(&self, set: &PointSet) -> Result<()> {
        if let AssignmentConstraint::Fair { num_colors, .. } = *self {
            let colors = set
                .colors()
                .ok_or_else(|| Error::invalid("colors", "fair constraint needs colored points"))?;
            if let Some(&c) = colors.iter().find(|&&c| c >= num_colors) {
                return Err(Error::invalid("colors", format!("color {c} >= num_colors={num_colors}")));
            }
        }
        Ok(())
    }
}

/// How a cluster's radius is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusModel {
    /// Distance to an anchor data point chosen per cluster (anchors may repeat).
    Anchored,
    /// Minimum enclosing ball of the cluster (true 1-center radius). Solved by
    /// enumerating all assignments, so only tiny inputs are accepted.
    Enclosing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedSolution {
    /// Anchor entry per cluster (empty for [`RadiusModel::Enclosing`]).
    pub anchors: Vec<usize>,
    /// Cluster id per weight unit.
    pub partition: Vec<usize>,
    pub value: f64,
    pub model: RadiusModel,
}

fn unit_owner(set: &PointSet) -> Vec<usize> {
    let mut owner = Vec::with_capacity(set.total_weight() as usize);
    for i in 0..set.len() {
        owner.extend(std::iter::repeat_n(i, set.multiplicity(i) as usize));
    }
    owner
}

/// Checks a per-unit assignment into `clusters` clusters against the constraint.
pub fn assignment_satisfies(
    set: &PointSet,
    constraint: &AssignmentConstraint,
    clusters: usize,
    assignment: &[usize],
) -> bool {
    let owner = unit_owner(set);
    if assignment.len() != owner.len() || assignment.iter().any(|&c| c >= clusters) {
        return false;
    }
    match *constraint {
        AssignmentConstraint::Capacitated { capacity } => {
            let mut load = vec![0u64; clusters];
            for &c in assignment {
                load[c] += 1;
            }
            load.iter().all(|&l| l <= capacity)
        }
        AssignmentConstraint::Fair { a, b, num_colors } => {
            let Some(colors) = set.colors() else {
                return false;
            };
            let ncol = num_colors as usize;
            let mut totals = vec![0u64; ncol];
            let mut per = vec![vec![0u64; ncol]; clusters];
            for (u, &c) in assignment.iter().enumerate() {
                let col = colors[owner[u]] as usize;
                if col >= ncol {
                    return false;
                }
                totals[col] += 1;
                per[c][col] += 1;
            }
            (0..ncol).filter(|&col| totals[col] > 0).all(|col| {
                let (lo, hi) = AssignmentConstraint::fair_bounds(a, b, totals[col]);
                per.iter().all(|row| row[col] >= lo && row[col] <= hi)
            })
        }
    }
}

/// Decides whether the units of `set` can be assigned to `centers` (one
/// cluster per listed center, repeats allowed) with every unit within
/// `radius` of its center, subject to the constraint. Capacities use one
/// max-flow; fairness one lower-bounded flow per color. Returns an integral
/// per-unit assignment on success.
pub fn feasible_assignment(
    set: &PointSet,
    centers: &[usize],
    radius: f64,
    constraint: &AssignmentConstraint,
) -> Result<Option<Vec<usize>>> {
    if !(radius >= 0.0) {
        return Err(Error::invalid("radius", "must be >= 0"));
    }
    if let Some(&c) = centers.iter().find(|&&c| c >= set.len()) {
        return Err(Error::invalid("centers", format!("index {c} out of range")));
    }
    constraint.check_input(set)?;
    if set.is_empty() {
        return Ok(Some(Vec::new()));
    }
    if centers.is_empty() {
        return Ok(None);
    }
    let k = centers.len();
    let reach: Vec<Vec<bool>> = (0..set.len())
        .map(|i| {
            centers
                .iter()
                .map(|&c| dist(set.point(i), set.point(c)) <= radius)
                .collect()
        })
        .collect();

    // per entry: units routed to each cluster
    let mut routed = vec![vec![0i64; k]; set.len()];
    let groups: Vec<(Vec<usize>, i64, i64)> = match *constraint {
        AssignmentConstraint::Capacitated { capacity } => {
            vec![((0..set.len()).collect(), 0, capacity.min(i64::MAX as u64) as i64)]
        }
        AssignmentConstraint::Fair { a, b, num_colors } => {
            let colors = set.colors().expect("checked above");
            (0..num_colors)
                .filter_map(|col| {
                    let members: Vec<usize> = (0..set.len()).filter(|&i| colors[i] == col).collect();
                    let total: u64 = members.iter().map(|&i| set.multiplicity(i)).sum();
                    if total == 0 {
                        return None;
                    }
                    let (lo, hi) = AssignmentConstraint::fair_bounds(a, b, total);
                    Some((members, lo as i64, hi as i64))
                })
                .collect()
        }
    };

    for (members, lo, hi) in groups {
        let nm = members.len();
        let (s, t) = (0, nm + k + 1);
        let mut net = BoundedFlow::new(nm + k + 2);
        let mut arcs = Vec::new();
        for (a, &i) in members.iter().enumerate() {
            let m = set.multiplicity(i) as i64;
            net.add_edge(s, 1 + a, m, m);
            for c in 0..k {
                if reach[i][c] {
                    arcs.push((i, c, net.add_edge(1 + a, 1 + nm + c, 0, m)));
                }
            }
        }
        for c in 0..k {
            net.add_edge(1 + nm + c, t, lo, hi);
        }
        let Some(flows) = net.feasible(s, t) else {
            return Ok(None);
        };
        for (i, c, e) in arcs {
            routed[i][c] += flows[e];
        }
    }

    let mut partition = Vec::with_capacity(set.total_weight() as usize);
    for row in &routed {
        for (c, &f) in row.iter().enumerate() {
            partition.extend(std::iter::repeat_n(c, f as usize));
        }
    }
    Ok(Some(partition))
}

/// Exhaustive search over all `centers.len()^n` unit assignments (n = total
/// weight). Returns the first assignment, in lexicographic order, that keeps
/// every unit within `radius` of its center and satisfies `predicate`.
pub fn enumerate_feasible_assignment(
    set: &PointSet,
    centers: &[usize],
    radius: f64,
    predicate: impl Fn(&[usize]) -> bool,
) -> Result<Option<Vec<usize>>> {
    let owner = unit_owner(set);
    let k = centers.len();
    if owner.is_empty() {
        return Ok(predicate(&[]).then(Vec::new));
    }
    if k == 0 {
        return Ok(None);
    }
    check_budget((k as u128).checked_pow(owner.len() as u32).unwrap_or(u128::MAX))?;
    let allowed: Vec<Vec<bool>> = owner
        .iter()
        .map(|&i| centers.iter().map(|&c| dist(set.point(i), set.point(c)) <= radius).collect())
        .collect();
    let mut found = None;
    for_each_assignment(owner.len(), k, |asg| {
        if asg.iter().enumerate().all(|(u, &c)| allowed[u][c]) && predicate(asg) {
            found = Some(asg.to_vec());
            return true;
        }
        false
    });
    Ok(found)
}

/// Visits `[k]^n` in lexicographic order until `f` returns true.
fn for_each_assignment(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut a = vec![0usize; n];
    loop {
        if f(&a) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            a[i] += 1;
            if a[i] < k {
                break;
            }
            a[i] = 0;
        }
    }
}

/// Anchored constrained k-center; see [`exact_constrained_with`].
pub fn exact_constrained(set: &PointSet, k: usize, constraint: &AssignmentConstraint) -> Result<ConstrainedSolution> {
    exact_constrained_with(set, k, constraint, RadiusModel::Anchored)
}

/// Exact k-center under an assignment constraint.
///
/// Anchored: binary search over candidate radii (pairwise distances between
/// distinct locations, and 0); at each radius, try every k-multiset of
/// distinct locations as anchors through [`feasible_assignment`]. The
/// lexicographically first anchor multiset at the optimal radius is returned.
///
/// Enclosing: enumerate every assignment of units to `k` labelled clusters
/// and minimise the largest minimum-enclosing-ball radius.
pub fn exact_constrained_with(
    set: &PointSet,
    k: usize,
    constraint: &AssignmentConstraint,
    model: RadiusModel,
) -> Result<ConstrainedSolution> {
    if set.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    constraint.check_input(set)?;
    if let AssignmentConstraint::Capacitated { capacity } = *constraint {
        if (k as u128) * (capacity as u128) < set.total_weight() as u128 {
            return Err(Error::ConstraintInfeasible);
        }
    }
    match model {
        RadiusModel::Anchored => anchored(set, k, constraint),
        RadiusModel::Enclosing => enclosing(set, k, constraint),
    }
}

fn anchored(set: &PointSet, k: usize, constraint: &AssignmentConstraint) -> Result<ConstrainedSolution> {
    let distinct = set.distinct_indices();
    let m = distinct.len();
    check_budget(binomial(m + k - 1, k))?;

    let mut radii = vec![0.0];
    for a in 0..m {
        for b in a + 1..m {
            radii.push(dist(set.point(distinct[a]), set.point(distinct[b])));
        }
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let first_feasible = |r: f64| -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        let mut out = None;
        let mut err = None;
        for_each_multiset_until(m, k, |ms| {
            let anchors: Vec<usize> = ms.iter().map(|&j| distinct[j]).collect();
            match feasible_assignment(set, &anchors, r, constraint) {
                Ok(Some(p)) => {
                    out = Some((anchors, p));
                    true
                }
                Ok(None) => false,
                Err(e) => {
                    err = Some(e);
                    true
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    };

    if first_feasible(*radii.last().unwrap())?.is_none() {
        return Err(Error::ConstraintInfeasible);
    }
    let (mut lo, mut hi) = (0usize, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if first_feasible(radii[mid])?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (anchors, partition) = first_feasible(radii[lo])?.expect("feasible at the searched radius");
    let owner = unit_owner(set);
    let value = partition
        .iter()
        .enumerate()
        .map(|(u, &c)| dist(set.point(owner[u]), set.point(anchors[c])))
        .fold(0.0, f64::max);
    Ok(ConstrainedSolution {
        anchors,
        partition,
        value,
        model: RadiusModel::Anchored,
    })
}

/// Smallest radius at which the units can be assigned to the fixed anchors
/// under the constraint. Candidate radii are entry-to-anchor distances.
pub fn anchored_search(set: &PointSet, anchors: &[usize], c: &AssignmentConstraint) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut radii: Vec<f64> = (0..set.len())
        .flat_map(|i| anchors.iter().map(move |&a| dist(set.point(i), set.point(a))))
        .collect();
    radii.push(0.0);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let ok = |r: f64| feasible_assignment(set, anchors, r, c).map(|x| x.is_some());
    if !ok(*radii.last().expect("nonempty"))? {
        return Err(Error::ConstraintInfeasible);
    }
    let (mut lo, mut hi) = (0, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(radii[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(radii[lo])
}

fn for_each_multiset_until(m: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut done = false;
    for_each_multiset(m, k, |ms| {
        if !done {
            done = f(ms);
        }
    });
}

const MAX_ENCLOSING_UNITS: usize = 16;

fn enclosing(set: &PointSet, k: usize, constraint: &AssignmentConstraint) -> Result<ConstrainedSolution> {
    let owner = unit_owner(set);
    let n = owner.len();
    if n > MAX_ENCLOSING_UNITS {
        return Err(Error::OracleBudgetExceeded {
            needed: (k as u128).saturating_pow(n as u32),
            budget: super::ORACLE_BUDGET,
        });
    }
    check_budget((k as u128).checked_pow(n as u32).unwrap_or(u128::MAX))?;

    // radius of every subset of units, by bitmask
    let mut memo: Vec<f64> = vec![-1.0; 1 << n];
    let mut radius_of = |mask: usize| -> f64 {
        if memo[mask] < 0.0 {
            let pts: Vec<&[f64]> = (0..n).filter(|u| mask >> u & 1 == 1).map(|u| set.point(owner[u])).collect();
            memo[mask] = minimum_enclosing_radius(&pts);
        }
        memo[mask]
    };

    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_assignment(n, k, |asg| {
        if !assignment_satisfies(set, constraint, k, asg) {
            return false;
        }
        let mut masks = vec![0usize; k];
        for (u, &c) in asg.iter().enumerate() {
            masks[c] |= 1 << u;
        }
        let v = masks.iter().map(|&mk| radius_of(mk)).fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, asg.to_vec()));
        }
        false
    });
    let (value, partition) = best.ok_or(Error::ConstraintInfeasible)?;
    Ok(ConstrainedSolution {
        anchors: Vec::new(),
        partition,
        value,
        model: RadiusModel::Enclosing,
    })
}

/// Radius of the smallest ball containing `points` (0 for empty input).
///
/// The optimal ball is the circumscribed ball, within their affine hull, of
/// some subset of at most `d+1` points; all such subsets are tried, so this
/// is meant for small sets only.
pub fn minimum_enclosing_radius(points: &[&[f64]]) -> f64 {
    let mut uniq: Vec<&[f64]> = Vec::new();
    for p in points {
        if !uniq.iter().any(|q| q == p) {
            uniq.push(p);
        }
    }
    match uniq.len() {
        0 | 1 => return 0.0,
        _ => {}
    }
    let d = uniq[0].len();
    let m = uniq.len();
    let mut best = f64::INFINITY;
    let max_size = (d + 1).min(m);
    for size in 2..=max_size {
        super::for_each_combination(m, size, |c| {
            let sub: Vec<&[f64]> = c.iter().map(|&i| uniq[i]).collect();
            let Some(center) = circumcenter(&sub) else {
                return;
            };
            let r = dist(&center, sub[0]);
            if r >= best {
                return;
            }
            let tol = r * 1e-12 + 1e-12;
            if uniq.iter().all(|p| dist(p, &center) <= r + tol) {
                best = r;
            }
        });
    }
    best
}

/// Center of the ball through all `pts` lying in their affine hull, or None
/// when the points are affinely dependent.
fn circumcenter(pts: &[&[f64]]) -> Option<Vec<f64>> {
    let base = pts[0];
    let s = pts.len() - 1;
    let vs: Vec<Vec<f64>> = pts[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // Gram system G lambda = rhs, rhs_j = |v_j|^2 / 2
    let mut g: Vec<Vec<f64>> = (0..s)
        .map(|i| {
            let mut row: Vec<f64> = (0..s).map(|j| dot(&vs[i], &vs[j])).collect();
            row.push(dot(&vs[i], &vs[i]) / 2.0);
            row
        })
        .collect();
    let scale = g.iter().map(|r| r[..s].iter().fold(0.0f64, |a, x| a.max(x.abs()))).fold(0.0, f64::max);
    for col in 0..s {
        let piv = (col..s).max_by(|&a, &b| g[a][col].abs().total_cmp(&g[b][col].abs()))?;
        if g[piv][col].abs() <= 1e-10 * scale {
            return None;
        }
        g.swap(col, piv);
        for r in 0..s {
            if r != col {
                let f = g[r][col] / g[col][col];
                if f != 0.0 {
                    for c in col..=s {
                        g[r][c] -= f * g[col][c];
                    }
                }
            }
        }
    }
    let lambda: Vec<f64> = (0..s).map(|i| g[i][s] / g[i][i]).collect();
    let mut center = base.to_vec();
    for (l, v) in lambda.iter().zip(&vs) {
        for (c, x) in center.iter_mut().zip(v) {
            *c += l * x;
        }
    }
    Some(center)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::exact_discrete_kcenter;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_coords(1, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn two_sites() -> PointSet {
        // A = 0, B = 10; at each site 2 blue (0) and 2 red (1)
        line(&[0.0, 0.0, 0.0, 0.0, 10.0, 10.0, 10.0, 10.0])
            .with_colors(vec![0, 0, 1, 1, 0, 0, 1, 1])
            .unwrap()
    }

    #[test]
    fn capacitated_examples() {
        let p = line(&[0.0, 1.0, 10.0, 11.0]);
        let cap2 = AssignmentConstraint::capacitated(2).unwrap();
        let part = feasible_assignment(&p, &[0, 2], 1.0, &cap2).unwrap().unwrap();
        assert_eq!(part, vec![0, 0, 1, 1]);
        let cap1 = AssignmentConstraint::capacitated(1).unwrap();
        assert_eq!(feasible_assignment(&p, &[0, 2], 1.0, &cap1).unwrap(), None);
    }

    #[test]
    fn fair_two_sites() {
        let p = two_sites();
        let half = AssignmentConstraint::fair(0.5, 0.5, 2).unwrap();
        let part = feasible_assignment(&p, &[0, 4], 0.0, &half).unwrap().unwrap();
        assert_eq!(part, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        assert!(assignment_satisfies(&p, &half, 2, &part));
        let s = exact_constrained(&p, 2, &half).unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn fair_needs_colors() {
        let half = AssignmentConstraint::fair(0.5, 0.5, 2).unwrap();
        assert!(feasible_assignment(&line(&[0.0]), &[0], 0.0, &half).is_err());
        assert!(AssignmentConstraint::fair(0.6, 0.5, 2).is_err());
        let bad = line(&[0.0]).with_colors(vec![5]).unwrap();
        assert!(feasible_assignment(&bad, &[0], 0.0, &half).is_err());
    }

    #[test]
    fn exact_capacitated_example() {
        let p = line(&[0.0, 1.0, 10.0, 11.0]);
        let s = exact_constrained(&p, 2, &AssignmentConstraint::capacitated(2).unwrap()).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.anchors, vec![0, 2]);
        assert_eq!(
            exact_constrained(&p, 2, &AssignmentConstraint::capacitated(1).unwrap()),
            Err(Error::ConstraintInfeasible)
        );
    }

    #[test]
    fn repeated_anchors_for_heavy_location() {
        // five units at one spot, two clusters of capacity 3
        let p = line(&[4.0]).with_multiplicities(vec![5]).unwrap();
        let s = exact_constrained(&p, 2, &AssignmentConstraint::capacitated(3).unwrap()).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.anchors, vec![0, 0]);
    }

    #[test]
    fn vacuous_constraint_matches_vanilla() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let n = rng.random_range(1..8);
            let k = rng.random_range(1..3);
            let p = line(&(0..n).map(|_| rng.random_range(0..30) as f64).collect::<Vec<_>>());
            let cap = AssignmentConstraint::capacitated(n as u64).unwrap();
            assert_eq!(
                exact_constrained(&p, k, &cap).unwrap().value,
                exact_discrete_kcenter(&p, k).unwrap().value
            );
        }
    }

    #[test]
    fn flow_monotone_in_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let n = rng.random_range(2..8);
            let p = line(&(0..n).map(|_| rng.random_range(0..20) as f64).collect::<Vec<_>>());
            let cap = AssignmentConstraint::capacitated(rng.random_range(1..5)).unwrap();
            let centers = [0, n - 1];
            let mut was = false;
            for r in 0..25 {
                let now = feasible_assignment(&p, &centers, r as f64, &cap).unwrap().is_some();
                assert!(!was || now);
                was = now;
            }
        }
    }

    #[test]
    fn anchored_search_matches_exact_when_anchors_optimal() {
        let p = line(&[0.0, 1.0, 10.0, 11.0]);
        let cap = AssignmentConstraint::capacitated(2).unwrap();
        assert_eq!(anchored_search(&p, &[0, 2], &cap).unwrap(), 1.0);
        assert_eq!(anchored_search(&p, &[0, 1], &cap).unwrap(), 10.0);
        let cap1 = AssignmentConstraint::capacitated(1).unwrap();
        assert_eq!(anchored_search(&p, &[0, 1], &cap1), Err(Error::ConstraintInfeasible));
    }

    #[test]
    fn mer_radius_basics() {
        assert_eq!(minimum_enclosing_radius(&[]), 0.0);
        assert_eq!(minimum_enclosing_radius(&[&[1.0, 2.0]]), 0.0);
        let tri: [&[f64]; 3] = [&[0.0, 0.0], &[2.0, 0.0], &[1.0, 0.1]];
        assert!((minimum_enclosing_radius(&tri) - 1.0).abs() < 1e-12);
        // equilateral triangle with unit edges: circumradius 1/sqrt(3)
        let eq: [&[f64]; 3] = [&[0.0, 0.0], &[1.0, 0.0], &[0.5, 3f64.sqrt() / 2.0]];
        assert!((minimum_enclosing_radius(&eq) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let colinear: [&[f64]; 3] = [&[0.0, 0.0], &[1.0, 1.0], &[3.0, 3.0]];
        assert!((minimum_enclosing_radius(&colinear) - 18f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn enclosing_is_at_most_anchored() {
        let p = line(&[0.0, 1.0, 10.0, 11.0]);
        let cap = AssignmentConstraint::capacitated(2).unwrap();
        let e = exact_constrained_with(&p, 2, &cap, RadiusModel::Enclosing).unwrap();
        assert_eq!(e.value, 0.5);
        assert!(e.value <= exact_constrained(&p, 2, &cap).unwrap().value);
    }

    #[test]
    fn assignment_enumeration_agrees_small() {
        let p = line(&[0.0, 1.0, 10.0, 11.0]);
        let cap = AssignmentConstraint::capacitated(2).unwrap();
        let pred = |a: &[usize]| assignment_satisfies(&p, &cap, 2, a);
        let e = enumerate_feasible_assignment(&p, &[0, 2], 1.0, pred).unwrap();
        assert_eq!(e, Some(vec![0, 0, 1, 1]));
        let e = enumerate_feasible_assignment(&p, &[0, 2], 0.5, pred).unwrap();
        assert_eq!(e, None);
    }
}
