//! Log-determinant of the reduced graph Laplacian.
//!
//! Both routes eliminate the Laplacian with vertex 0 deleted and add up the
//! logarithms of the pivots, so counts far beyond `f64::MAX` stay finite.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Graphs at or below this many vertices use the dense factorization.
pub const DENSE_LIMIT: usize = 400;
/// Average degree above which the dense route is used regardless of size.
const DENSE_DEGREE: f64 = 48.0;

pub(crate) fn use_dense(g: &Graph) -> bool {
    let n = g.n();
    n <= DENSE_LIMIT || 2.0 * g.m() as f64 / n as f64 > DENSE_DEGREE
}

fn pivot_floor(g: &Graph) -> f64 {
    1e-12 * g.max_degree().max(1) as f64
}

/// Dense LDLᵀ (Cholesky without square roots) of the reduced Laplacian.
pub fn log_det_dense(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n <= 1 {
        return Ok(0.0);
    }
    let dim = n - 1;
    let mut a = vec![0.0f64; dim * dim];
    for v in 1..n {
        a[(v - 1) * dim + (v - 1)] = g.degree(v as u32) as f64;
    }
    for &(u, v) in g.edges() {
        if u == 0 || v == 0 {
            continue;
        }
        let (i, j) = (u as usize - 1, v as usize - 1);
        a[i * dim + j] = -1.0;
        a[j * dim + i] = -1.0;
    }
    let floor = pivot_floor(g);
    let mut log_det = 0.0;
    // Right-looking elimination on the lower triangle.
    for k in 0..dim {
        let pivot = a[k * dim + k];
        if pivot <= floor || !pivot.is_finite() {
            return Err(Error::NumericallyDisconnected { step: k, pivot });
        }
        log_det += pivot.ln();
        // mirror column k into row k so the update can read it contiguously
        for i in k + 1..dim {
            a[k * dim + i] = a[i * dim + k];
        }
        let inv = 1.0 / pivot;
        for i in k + 1..dim {
            let lik = a[i * dim + k];
            if lik == 0.0 {
                continue;
            }
            let f = lik * inv;
            let (head, tail) = a.split_at_mut(i * dim);
            let row_k = &head[k * dim..k * dim + dim];
            let row_i = &mut tail[..dim];
            for j in k + 1..=i {
                row_i[j] -= f * row_k[j];
            }
        }
    }
    Ok(log_det)
}

/// Sparse elimination in minimum-degree order.
///
/// The Schur complement is kept as sorted sparse rows; eliminating a vertex
/// turns its neighborhood into a clique. Ties in degree go to the smaller
/// index so the pivot sequence is deterministic.
pub fn log_det_sparse(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n <= 1 {
        return Ok(0.0);
    }
    let mut diag: Vec<f64> = (0..n as u32).map(|v| g.degree(v) as f64).collect();
    let mut rows: Vec<Vec<(u32, f64)>> = (0..n as u32)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| w != 0)
                .map(|&w| (w, -1.0))
                .collect()
        })
        .collect();
    rows[0].clear();
    let mut eliminated = vec![false; n];
    eliminated[0] = true;

    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = (1..n as u32)
        .map(|v| Reverse((rows[v as usize].len(), v)))
        .collect();
    let floor = pivot_floor(g);
    let mut log_det = 0.0;
    let mut step = 0usize;
    let mut merged: Vec<(u32, f64)> = Vec::new();

    while let Some(Reverse((deg, v))) = heap.pop() {
        let vi = v as usize;
        if eliminated[vi] || rows[vi].len() != deg {
            continue;
        }
        let pivot = diag[vi];
        if pivot <= floor || !pivot.is_finite() {
            return Err(Error::NumericallyDisconnected { step, pivot });
        }
        log_det += pivot.ln();
        eliminated[vi] = true;
        step += 1;

        let row_v = std::mem::take(&mut rows[vi]);
        let inv = 1.0 / pivot;
        for &(i, a_iv) in &row_v {
            let ii = i as usize;
            diag[ii] -= a_iv * a_iv * inv;
            // merge row i (minus v) with the scaled clique contribution
            let row_i = std::mem::take(&mut rows[ii]);
            merged.clear();
            merged.reserve(row_i.len() + row_v.len());
            let (mut p, mut q) = (0, 0);
            while p < row_i.len() || q < row_v.len() {
                let take_left = q >= row_v.len()
                    || (p < row_i.len() && row_i[p].0 <= row_v[q].0);
                let take_right = p >= row_i.len()
                    || (q < row_v.len() && row_v[q].0 <= row_i[p].0);
                if take_left && take_right {
                    let (j, a_ij) = row_i[p];
                    let (_, a_jv) = row_v[q];
                    if j != v && j != i {
                        merged.push((j, a_ij - a_iv * a_jv * inv));
                    }
                    p += 1;
                    q += 1;
                } else if take_left {
                    let (j, a_ij) = row_i[p];
                    if j != v {
                        merged.push((j, a_ij));
                    }
                    p += 1;
                } else {
                    let (j, a_jv) = row_v[q];
                    if j != i {
                        merged.push((j, -a_iv * a_jv * inv));
                    }
                    q += 1;
                }
            }
            let mut row = row_i;
            row.clear();
            row.extend_from_slice(&merged);
            let len = row.len();
            rows[ii] = row;
            heap.push(Reverse((len, i)));
        }
    }
    Ok(log_det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn dense_and_sparse_agree_on_cycles() {
        for n in 3..12 {
            let g = cycle(n);
            let d = log_det_dense(&g).unwrap();
            let s = log_det_sparse(&g).unwrap();
            assert!((d - (n as f64).ln()).abs() < 1e-12);
            assert!((s - d).abs() < 1e-12);
        }
    }

    #[test]
    fn both_routes_reject_disconnected_input() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            log_det_dense(&g),
            Err(Error::NumericallyDisconnected { .. })
        ));
        assert!(matches!(
            log_det_sparse(&g),
            Err(Error::NumericallyDisconnected { .. })
        ));
    }
}
