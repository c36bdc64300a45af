use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::operator::LinearOperator;
use crate::error::{Error, Result};

pub const SELFADJOINT_TOLERANCE: f64 = 1e-12;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the sparsity graph, each sorted, ordered by first index.
pub(crate) fn blocks(op: &LinearOperator) -> Vec<Vec<usize>> {
    let n = op.space().dim();
    let mut parent: Vec<usize> = (0..n).collect();
    for (r, row) in op.matrix().outer_iterator().enumerate() {
        for (c, _) in row.iter() {
            let (a, b) = (find(&mut parent, r), find(&mut parent, c));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Eigenvalues of a selfadjoint linear operator, ascending with multiplicity.
///
/// The matrix is permuted to block-diagonal form along the connected
/// components of its sparsity pattern and each block is diagonalized densely.
pub fn spectrum(op: &LinearOperator) -> Result<Vec<f64>> {
    if op.is_antilinear() {
        return Err(Error::Antilinear);
    }
    let deviation = op.selfadjoint_deviation();
    if !(deviation <= SELFADJOINT_TOLERANCE) {
        return Err(Error::NotSelfAdjoint { deviation });
    }
    let parts: Vec<Vec<f64>> = blocks(op)
        .par_iter()
        .map(|idx| {
            if idx.len() == 1 {
                return vec![op.get(idx[0], idx[0]).re];
            }
            let m =
                DMatrix::<Complex64>::from_fn(idx.len(), idx.len(), |r, c| op.get(idx[r], idx[c]));
            // symmetrize away rounding-level anti-Hermitian parts
            let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
            h.symmetric_eigenvalues().iter().copied().collect()
        })
        .collect();
    let mut all: Vec<f64> = parts.into_iter().flatten().collect();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Groups an ascending spectrum into (value, multiplicity), merging neighbours
/// closer than `resolution`. The reported value is the first of each run.
pub fn merge_multiplicities(sorted: &[f64], resolution: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &x in sorted {
        match out.last_mut() {
            Some((_, m)) if x - last <= resolution => {
                *m += 1;
            }
            _ => out.push((x, 1)),
        }
        last = x;
    }
    out
}

/// max_i |a_i − b_i| for equal-length sorted lists, +∞ otherwise.
pub fn spectral_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
