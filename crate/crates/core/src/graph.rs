//! Undirected weighted graphs, connectivity, and Laplacian assembly.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, SparseSymMatrix};

/// One input edge: endpoints and an optional weight (1.0 when absent).
pub type Edge = (usize, usize, Option<f64>);

/// Undirected graph with symmetric CSR adjacency and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    ne: usize,
    row_ptr: Vec<usize>,
    adj: Vec<usize>,
    weights: Vec<f64>,
}

impl Graph {
    /// Build a graph on `n` vertices. Each undirected edge must appear once.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        let mut directed = Vec::with_capacity(2 * edges.len());
        for &(i, j, w) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            let w = w.unwrap_or(1.0);
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight(i, j, w));
            }
            directed.push((i, j, w));
            directed.push((j, i, w));
        }
        directed.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for w in directed.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                let (a, b) = (w[0].0.min(w[0].1), w[0].0.max(w[0].1));
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &(i, _, _) in &directed {
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            n,
            ne: edges.len(),
            row_ptr,
            adj: directed.iter().map(|e| e.1).collect(),
            weights: directed.iter().map(|e| e.2).collect(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    #[inline]
    pub fn ne(&self) -> usize {
        self.ne
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    #[inline]
    pub fn neighbor_weights(&self, i: usize) -> &[f64] {
        &self.weights[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.neighbor_weights(i).iter().sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && self.neighbors(i).binary_search(&j).is_ok()
    }

    pub fn edge_weight(&self, i: usize, j: usize) -> Option<f64> {
        let k = self.neighbors(i).binary_search(&j).ok()?;
        Some(self.neighbor_weights(i)[k])
    }

    /// Undirected edges with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .zip(self.neighbor_weights(i))
                .filter(move |(&j, _)| j > i)
                .map(move |(&j, &w)| (i, j, w))
        })
    }

    /// Lexicographically first edge, if any.
    pub fn first_edge(&self) -> Option<(usize, usize)> {
        self.edges().next().map(|(i, j, _)| (i, j))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum::<f64>() / 2.0
    }

    pub fn average_weighted_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.total_weight() / self.n as f64
        }
    }

    /// Induced subgraph on `vertices` (renumbered in the given order).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut new_id = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            new_id[v] = k;
        }
        let edges: Vec<Edge> = self
            .edges()
            .filter(|&(i, j, _)| new_id[i] != usize::MAX && new_id[j] != usize::MAX)
            .map(|(i, j, w)| (new_id[i], new_id[j], Some(w)))
            .collect();
        // endpoints are distinct and unique by construction
        Graph::from_edges(vertices.len(), &edges).expect("induced subgraph of a valid graph")
    }
}

/// Connected-component labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentLabels {
    pub labels: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl ComponentLabels {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn largest(&self) -> &[usize] {
        self.members.first().map_or(&[], Vec::as_slice)
    }
}

/// BFS labeling; component 0 is the largest, ties broken by smallest vertex id.
pub fn connected_components(g: &Graph) -> ComponentLabels {
    let mut raw = vec![usize::MAX; g.n()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        if raw[s] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut comp = vec![s];
        raw[s] = id;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if raw[u] == usize::MAX {
                    raw[u] = id;
                    comp.push(u);
                    queue.push_back(u);
                }
            }
        }
        comp.sort_unstable();
        members.push(comp);
    }
    // discovery order already sorts by smallest vertex; stable sort keeps it for ties
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| members[b].len().cmp(&members[a].len()));
    let mut remap = vec![0; members.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let labels = raw.iter().map(|&r| remap[r]).collect();
    let members = order.into_iter().map(|o| std::mem::take(&mut members[o])).collect();
    ComponentLabels { labels, members }
}

/// Graph Laplacian D − W of a connected graph.
pub fn laplacian(g: &Graph) -> Result<SparseSymMatrix> {
    let comps = connected_components(g);
    if comps.count() > 1 {
        return Err(Error::DisconnectedInput(comps.count()));
    }
    let n = g.n();
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(2 * g.ne() + n);
    let mut vals = Vec::with_capacity(2 * g.ne() + n);
    row_ptr.push(0);
    for i in 0..n {
        let nb = g.neighbors(i);
        let w = g.neighbor_weights(i);
        let split = nb.partition_point(|&j| j < i);
        for k in 0..split {
            cols.push(nb[k]);
            vals.push(-w[k]);
        }
        cols.push(i);
        vals.push(w.iter().sum());
        for k in split..nb.len() {
            cols.push(nb[k]);
            vals.push(-w[k]);
        }
        row_ptr.push(cols.len());
    }
    CsrMatrix::from_raw(n, n, row_ptr, cols, vals)
}

/// Rank-1 shift ℒ + λ e eᵀ with e = e_i + e_j for the edge (i, j).
pub fn spd_shift(lap: &SparseSymMatrix, edge: (usize, usize), lambda: f64) -> Result<SparseSymMatrix> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let (i, j) = edge;
    let n = lap.n_rows();
    if i >= n || j >= n || i == j || lap.get(i, j) == 0.0 {
        return Err(Error::EdgeNotPresent(i, j));
    }
    let mut out = lap.clone();
    for (r, c) in [(i, i), (j, j), (i, j), (j, i)] {
        *out.entry_mut(r, c).ok_or(Error::EdgeNotPresent(i, j))? += lambda;
    }
    Ok(out)
}

/// Laplacian shifted on the lexicographically first edge with λ defaulting to the
/// average weighted degree. Returns the shifted matrix, the edge, and λ.
pub fn shifted_laplacian(g: &Graph, lambda: Option<f64>) -> Result<(SparseSymMatrix, (usize, usize), f64)> {
    let lap = laplacian(g)?;
    let edge = g.first_edge().ok_or(Error::EmptyGraph)?;
    let lambda = lambda.unwrap_or_else(|| g.average_weighted_degree());
    Ok((spd_shift(&lap, edge, lambda)?, edge, lambda))
}
