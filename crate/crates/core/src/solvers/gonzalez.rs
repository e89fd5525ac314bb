use super::KCenterSolution;
use crate::error::{Error, Result};
use crate::geometry::{dist, dist_to_indices, PointSet};

/// Furthest-first traversal restricted to `candidates`, starting from
/// `candidates[start]`. Makes up to `picks` picks; stops early once every
/// candidate is at distance 0 from the picks. Returns the picks and, for
/// each pick, its distance to the earlier picks (infinity for the first).
pub(crate) fn gonzalez_on(
    set: &PointSet,
    candidates: &[usize],
    picks: usize,
    start: usize,
) -> (Vec<usize>, Vec<f64>) {
    let mut chosen = Vec::with_capacity(picks);
    let mut gaps = Vec::with_capacity(picks);
    if candidates.is_empty() || picks == 0 {
        return (chosen, gaps);
    }
    let first = candidates[start];
    chosen.push(first);
    gaps.push(f64::INFINITY);
    let mut mind: Vec<f64> = candidates
        .iter()
        .map(|&i| dist(set.point(i), set.point(first)))
        .collect();
    while chosen.len() < picks {
        let mut best = 0usize;
        for (j, &d) in mind.iter().enumerate() {
            if d > mind[best] {
                best = j;
            }
        }
        if mind[best] <= 0.0 {
            break;
        }
        let next = candidates[best];
        chosen.push(next);
        gaps.push(mind[best]);
        for (j, &i) in candidates.iter().enumerate() {
            let d = dist(set.point(i), set.point(next));
            if d < mind[j] {
                mind[j] = d;
            }
        }
    }
    (chosen, gaps)
}

/// Gonzalez's furthest-first traversal for `k+1` picks (ties to the lowest
/// index). The first `k` picks are the centers; the value is the distance
/// of pick `k+1` to them. With at most `k` distinct locations the traversal
/// stops early, returning every distinct location and value 0.
pub fn gonzalez(set: &PointSet, k: usize, start_index: usize) -> Result<(Vec<usize>, KCenterSolution)> {
    if set.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    if start_index >= set.len() {
        return Err(Error::invalid("start_index", format!("{start_index} >= n={}", set.len())));
    }
    let all: Vec<usize> = (0..set.len()).collect();
    let (s, gaps) = gonzalez_on(set, &all, k + 1, start_index);
    let value = if s.len() == k + 1 { gaps[k] } else { 0.0 };
    let centers = s[..s.len().min(k)].to_vec();
    Ok((
        s,
        KCenterSolution {
            center_indices: centers,
            value,
        },
    ))
}

/// Furthest point query: the entry of `p` furthest from `q` (lowest index on
/// ties) and its distance.
pub fn fpq(p: &PointSet, q: &PointSet) -> Result<(usize, f64)> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput);
    }
    q.check_dim(p.dim())?;
    let all_q: Vec<usize> = (0..q.len()).collect();
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, x) in p.iter().enumerate() {
        let d = dist_to_indices(x, q, &all_q);
        if d > best.1 {
            best = (i, d);
        }
    }
    Ok(best)
}

/// Gonzalez driven by an approximate furthest-point oracle. `oracle(P, S)`
/// must return an index of `P` whose distance to `S` is at least `1/alpha`
/// of the furthest. Returns the first `k` picks and `alpha * D`, where `D`
/// is the closest-pair distance among all `k+1` picks.
pub fn relaxed_gonzalez<F>(set: &PointSet, k: usize, alpha: f64, mut oracle: F) -> Result<(Vec<usize>, f64)>
where
    F: FnMut(&PointSet, &[usize]) -> usize,
{
    if set.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    if !(alpha >= 1.0) {
        return Err(Error::invalid("alpha", "oracle factor must be >= 1"));
    }
    let mut picks = vec![0usize];
    while picks.len() < k + 1 {
        let next = oracle(set, &picks);
        if next >= set.len() {
            return Err(Error::InvalidOracleIndex(next));
        }
        picks.push(next);
    }
    let mut closest = f64::INFINITY;
    for a in 0..picks.len() {
        for b in a + 1..picks.len() {
            closest = closest.min(dist(set.point(picks[a]), set.point(picks[b])));
        }
    }
    picks.truncate(k);
    Ok((picks, alpha * closest))
}

/// Exact furthest-point oracle over index sets, for use with
/// [`relaxed_gonzalez`].
pub fn exact_oracle(set: &PointSet, s: &[usize]) -> usize {
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, p) in set.iter().enumerate() {
        let d = dist_to_indices(p, set, s);
        if d > best.1 {
            best = (i, d);
        }
    }
    best.0
}
