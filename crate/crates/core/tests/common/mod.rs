#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use proptest::prelude::*;

use attrclust::{CsrMatrix, Graph};

/// Edge sets on `lo..hi` vertices; pairs are normalized and deduplicated.
pub fn edge_set(lo: usize, hi: usize, max_edges: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (lo..hi).prop_flat_map(move |n| {
        let pairs = prop::collection::vec((0..n, 0..n), 0..max_edges);
        (Just(n), pairs).prop_map(|(n, raw)| {
            let set: BTreeSet<(usize, usize)> =
                raw.into_iter().filter(|(i, j)| i != j).map(|(i, j)| (i.min(j), i.max(j))).collect();
            (n, set.into_iter().collect())
        })
    })
}

/// A spanning path plus random chords, with weights in [0.5, 2).
pub fn connected_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    edge_set(lo, hi, 3 * hi).prop_flat_map(|(n, chords)| {
        let mut set: BTreeSet<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        set.extend(chords);
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let w = prop::collection::vec(0.5..2.0f64, edges.len());
        (Just(n), Just(edges), w).prop_map(|(n, edges, w)| {
            let e: Vec<_> = edges.iter().zip(w).map(|(&(i, j), w)| (i, j, Some(w))).collect();
            Graph::from_edges(n, &e).unwrap()
        })
    })
}

pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Graph {
    let e: Vec<_> = edges.iter().map(|&(i, j)| (i, j, None)).collect();
    Graph::from_edges(n, &e).unwrap()
}

pub fn dense(a: &CsrMatrix) -> DMatrix<f64> {
    let rows = a.to_dense();
    DMatrix::from_fn(a.n_rows(), a.n_cols(), |i, j| rows[i][j])
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.min()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
