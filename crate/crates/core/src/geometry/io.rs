//! Plain-text point-set format.
//!
//! ```text
//! d n
//! x_1 ... x_d [m=<mult>] [c=<color>]
//! ```
//!
//! Floats are written in shortest round-trip form, so write/read is exact.

use std::fmt::Write as _;

use super::PointSet;
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn read_point_set(text: &str) -> Result<PointSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let mut h = header.split_whitespace();
    let dim: usize = h
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(hline, "header must be `d n`"))?;
    let n: usize = h
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(hline, "header must be `d n`"))?;
    if h.next().is_some() {
        return Err(perr(hline, "trailing tokens in header"));
    }
    if dim == 0 {
        return Err(perr(hline, "d must be positive"));
    }

    let mut set = PointSet::empty(dim);
    for (lineno, line) in lines {
        let mut coords = Vec::with_capacity(dim);
        let mut mult = 1u64;
        let mut color = None;
        for tok in line.split_whitespace() {
            if let Some(v) = tok.strip_prefix("m=") {
                mult = v.parse().map_err(|_| perr(lineno, format!("bad multiplicity `{v}`")))?;
            } else if let Some(v) = tok.strip_prefix("c=") {
                color = Some(v.parse().map_err(|_| perr(lineno, format!("bad color `{v}`")))?);
            } else {
                if mult != 1 || color.is_some() {
                    return Err(perr(lineno, "coordinates must precede m= and c="));
                }
                coords.push(
                    tok.parse::<f64>()
                        .map_err(|_| perr(lineno, format!("bad float `{tok}`")))?,
                );
            }
        }
        set.push(coords, mult, color)
            .map_err(|e| perr(lineno, e.to_string()))?;
    }
    if set.len() != n {
        return Err(perr(hline, format!("header declares {n} points, found {}", set.len())));
    }
    Ok(set)
}

pub fn write_point_set(set: &PointSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", set.dim(), set.len());
    for i in 0..set.len() {
        let coords: Vec<String> = set.point(i).iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&coords.join(" "));
        if set.multiplicity(i) != 1 {
            let _ = write!(out, " m={}", set.multiplicity(i));
        }
        if let Some(c) = set.color(i) {
            let _ = write!(out, " c={c}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_suffixes_and_scientific() {
        let s = read_point_set("2 2\n1e-3 -2.5E2 m=3 c=1\n0 0 c=0\n").unwrap();
        assert_eq!(s.point(0), &[1e-3, -250.0]);
        assert_eq!(s.multiplicity(0), 3);
        assert_eq!(s.color(1), Some(0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_point_set("").is_err());
        assert!(read_point_set("2 1\n1\n").is_err());
        assert!(read_point_set("1 2\n1\n").is_err());
        assert!(read_point_set("1 1\nfoo\n").is_err());
        assert!(read_point_set("1 1\n1 m=0\n").is_err());
        assert!(read_point_set("1 2\n1 c=0\n2\n").is_err());
        assert!(read_point_set("1 1\nNaN\n").is_err());
    }

    proptest! {
        #[test]
        fn write_read_exact(
            xs in proptest::collection::vec(proptest::collection::vec(-1e12f64..1e12, 3), 0..20),
            m in 1u64..5,
        ) {
            let n = xs.len();
            let s = PointSet::from_coords(3, xs).unwrap()
                .with_multiplicities(vec![m; n]).unwrap()
                .with_colors((0..n as u32).collect()).unwrap();
            let back = read_point_set(&write_point_set(&s)).unwrap();
            // an empty colored set reads back uncolored
            if n > 0 { prop_assert_eq!(back, s); }
        }
    }
}
