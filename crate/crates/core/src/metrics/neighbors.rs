//! Chebyshev-metric neighbor searches over column-major point sets.
//!
//! A point set is a slice of coordinate columns, all of the same length; point
//! `i` is `(cols[0][i], cols[1][i], ...)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};

pub fn chebyshev(cols: &[&[f64]], i: usize, j: usize) -> f64 {
    cols.iter().map(|c| (c[i] - c[j]).abs()).fold(0.0, f64::max)
}

fn point_count(cols: &[&[f64]]) -> Result<usize> {
    let n = cols.first().map_or(0, |c| c.len());
    for c in cols {
        if c.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: c.len(),
            });
        }
    }
    Ok(n)
}

/// Distance from every point to its `k`-th nearest other point.
pub fn kth_neighbor_distances(cols: &[&[f64]], k: usize) -> Result<Vec<f64>> {
    let n = point_count(cols)?;
    if k == 0 || k >= n {
        return Err(Error::InsufficientSamples { needed: k + 1, got: n });
    }
    let mut dists = Vec::with_capacity(n - 1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        dists.clear();
        dists.extend((0..n).filter(|&j| j != i).map(|j| chebyshev(cols, i, j)));
        let (_, kth, _) = dists.select_nth_unstable_by(k - 1, |a, b| a.total_cmp(b));
        out.push(*kth);
    }
    Ok(out)
}

/// For each point `i`, the number of other points strictly closer than
/// `radii[i]`. Brute force over all pairs; this is the reference path.
pub fn neighbor_counts(cols: &[&[f64]], radii: &[f64]) -> Result<Vec<usize>> {
    let n = point_count(cols)?;
    if radii.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: radii.len(),
        });
    }
    Ok((0..n)
        .map(|i| (0..n).filter(|&j| j != i && chebyshev(cols, i, j) < radii[i]).count())
        .collect())
}

/// One-dimensional `neighbor_counts` via a sorted copy and binary search.
/// Produces exactly the brute-force counts: the boundary tests use the same
/// `|x_j - x_i| < r` comparison, which is monotone along the sorted order.
pub fn neighbor_counts_1d(values: &[f64], radii: &[f64]) -> Result<Vec<usize>> {
    if radii.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: radii.len(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(values
        .iter()
        .zip(radii)
        .map(|(&v, &r)| {
            let lo = sorted.partition_point(|&x| x.total_cmp(&v) == Ordering::Less && (x - v).abs() >= r);
            let hi = sorted.partition_point(|&x| x.total_cmp(&v) != Ordering::Greater || (x - v).abs() < r);
            // The point itself always lies in [lo, hi).
            hi - lo - 1
        })
        .collect())
}
