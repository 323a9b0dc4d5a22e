//! Orthonormal embedding basis and per-vertex block coordinates.
//!
//! A structure vertex is represented, for each basis vector, by an
//! (m+1)-entry block: its own entry followed by the entries at its m attribute
//! vertices. Vertices sharing an attribute value therefore share that block
//! entry exactly.

use nalgebra::DMatrix;

use crate::amg::SmoothVectorSet;
use crate::augment::AugmentedGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingBasis {
    /// Retained left singular vectors, each of length n_new.
    pub vectors: Vec<Vec<f64>>,
    /// All singular values, non-increasing.
    pub singular_values: Vec<f64>,
    pub trunc_tol: f64,
}

impl EmbeddingBasis {
    pub fn n_c(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }
}

/// Thin SVD of the stacked smooth vectors, keeping directions with
/// σ > trunc_tol · σ_max.
pub fn orthonormal_basis(s: &SmoothVectorSet, trunc_tol: f64) -> Result<EmbeddingBasis> {
    if s.is_empty() {
        return Err(Error::AllVectorsZero);
    }
    let n = s.dim();
    if let Some(v) = s.vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let mat = DMatrix::from_fn(n, s.len(), |i, r| s.vectors[r][i]);
    let svd = mat.svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);
    if !(smax > 0.0) {
        return Err(Error::AllVectorsZero);
    }
    let vectors = order
        .iter()
        .filter(|&&k| svd.singular_values[k] > trunc_tol * smax)
        .map(|&k| u.column(k).iter().copied().collect())
        .collect();
    Ok(EmbeddingBasis {
        vectors,
        singular_values,
        trunc_tol,
    })
}

/// Borrowed block coordinates of one vertex: n_c blocks of `block_len` entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockPoint<'a> {
    data: &'a [f64],
    n_c: usize,
    block_len: usize,
}

impl<'a> BlockPoint<'a> {
    pub fn new(data: &'a [f64], n_c: usize, block_len: usize) -> Result<Self> {
        if data.len() != n_c * block_len {
            return Err(Error::DimensionMismatch {
                expected: n_c * block_len,
                got: data.len(),
            });
        }
        Ok(Self { data, n_c, block_len })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_c, self.block_len)
    }

    pub fn block(&self, r: usize) -> &'a [f64] {
        &self.data[r * self.block_len..(r + 1) * self.block_len]
    }

    pub fn as_slice(&self) -> &'a [f64] {
        self.data
    }
}

/// sqrt(Σ_r ‖a_r − b_r‖²) over the n_c blocks.
pub fn block_distance(a: BlockPoint<'_>, b: BlockPoint<'_>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(a.shape(), b.shape()));
    }
    let total: f64 = (0..a.n_c)
        .map(|r| {
            a.block(r)
                .iter()
                .zip(b.block(r))
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
        })
        .sum();
    Ok(total.sqrt())
}

/// Squared block distance on raw flat slices of equal shape.
#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Dense n × n_c × (m+1) coordinate tensor for the structure vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexCoordinates {
    n: usize,
    n_c: usize,
    block_len: usize,
    data: Vec<f64>,
}

impl VertexCoordinates {
    /// Wrap an existing row-major buffer (vertex, basis vector, block entry).
    pub fn from_raw(n: usize, n_c: usize, block_len: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n_c * block_len || block_len == 0 {
            return Err(Error::DimensionMismatch {
                expected: n * n_c * block_len,
                got: data.len(),
            });
        }
        Ok(Self { n, n_c, block_len, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    /// m + 1
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Flattened length of one point.
    pub fn point_len(&self) -> usize {
        self.n_c * self.block_len
    }

    pub fn point(&self, i: usize) -> BlockPoint<'_> {
        let len = self.point_len();
        BlockPoint {
            data: &self.data[i * len..(i + 1) * len],
            n_c: self.n_c,
            block_len: self.block_len,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Gather each structure vertex's entry and its attribute-vertex entries.
pub fn block_coordinates(b: &EmbeddingBasis, ag: &AugmentedGraph) -> Result<VertexCoordinates> {
    if b.dim() != ag.n_new() {
        return Err(Error::DimensionMismatch {
            expected: ag.n_new(),
            got: b.dim(),
        });
    }
    let (n, n_c, block_len) = (ag.n(), b.n_c(), ag.m() + 1);
    let mut data = Vec::with_capacity(n * n_c * block_len);
    for i in 0..n {
        let attrs = ag.attribute_neighbors(i);
        for v in &b.vectors {
            data.push(v[i]);
            data.extend(attrs.iter().map(|&a| v[a]));
        }
    }
    VertexCoordinates::from_raw(n, n_c, block_len, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::{augment, AttributeTable};
    use crate::graph::Graph;

    fn set(vectors: Vec<Vec<f64>>) -> SmoothVectorSet {
        SmoothVectorSet { vectors, iterations: 1 }
    }

    #[test]
    fn single_ones_vector_normalizes() {
        let b = orthonormal_basis(&set(vec![vec![1.0; 4]]), 1e-12).unwrap();
        assert_eq!(b.n_c(), 1);
        let sign = b.vectors[0][0].signum();
        for &x in &b.vectors[0] {
            assert!((x * sign - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn duplicate_vectors_truncate() {
        let v = vec![1.0, 2.0, 3.0, -1.0];
        let b = orthonormal_basis(&set(vec![v.clone(), v]), 1e-12).unwrap();
        assert_eq!(b.n_c(), 1);
        assert_eq!(b.singular_values.len(), 2);
        assert!(b.singular_values[0] >= b.singular_values[1]);
    }

    #[test]
    fn zero_vectors_rejected() {
        assert!(matches!(orthonormal_basis(&set(vec![vec![0.0; 3]]), 1e-12), Err(Error::AllVectorsZero)));
        assert!(matches!(orthonormal_basis(&set(vec![]), 1e-12), Err(Error::AllVectorsZero)));
    }

    #[test]
    fn three_random_vectors_are_orthonormalized() {
        let mut rng = crate::rng::stream(4, "test", &[]);
        let vs: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..10).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect())
            .collect();
        let b = orthonormal_basis(&set(vs), 1e-12).unwrap();
        assert_eq!(b.n_c(), 3);
        for p in 0..3 {
            for q in 0..3 {
                let d: f64 = b.vectors[p].iter().zip(&b.vectors[q]).map(|(x, y)| x * y).sum();
                assert!((d - if p == q { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn distance_cases() {
        let a = [0.0, 0.0];
        let b = [3.0, 4.0];
        let pa = BlockPoint::new(&a, 1, 2).unwrap();
        let pb = BlockPoint::new(&b, 1, 2).unwrap();
        assert_eq!(block_distance(pa, pb).unwrap(), 5.0);
        assert_eq!(block_distance(pa, pa).unwrap(), 0.0);
        let pc = BlockPoint::new(&b, 2, 1).unwrap();
        assert!(matches!(block_distance(pa, pc), Err(Error::ShapeMismatch(..))));
        assert!(BlockPoint::new(&b, 3, 1).is_err());
    }

    fn toy() -> AugmentedGraph {
        let e = [(0, 1), (0, 2), (0, 3), (1, 3), (1, 2)];
        let g = Graph::from_edges(4, &e.map(|(i, j)| (i, j, None))).unwrap();
        let rows = [["M", "R", "C"], ["F", "D", "P"], ["F", "I", "J"], ["M", "D", "C"]];
        let t = AttributeTable::from_strings(
            vec!["l1".into(), "l2".into(), "l3".into()],
            rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
        )
        .unwrap();
        augment(&g, &t, 1.0).unwrap()
    }

    #[test]
    fn toy_vertices_share_attribute_entries() {
        let ag = toy();
        let vectors: Vec<Vec<f64>> = (0..2).map(|r| (0..12).map(|i| (i + 12 * r) as f64).collect()).collect();
        let basis = EmbeddingBasis {
            vectors,
            singular_values: vec![1.0, 1.0],
            trunc_tol: 0.0,
        };
        let c = block_coordinates(&basis, &ag).unwrap();
        assert_eq!((c.n(), c.n_c(), c.block_len()), (4, 2, 4));
        let (p1, p4) = (c.point(0), c.point(3));
        for r in 0..2 {
            // M is global id 4, C is global id 9
            assert_eq!(p1.block(r)[1], basis.vectors[r][4]);
            assert_eq!(p1.block(r)[1], p4.block(r)[1]);
            assert_eq!(p1.block(r)[3], basis.vectors[r][9]);
            assert_eq!(p1.block(r)[3], p4.block(r)[3]);
            assert_ne!(p1.block(r)[2], p4.block(r)[2]);
        }
    }

    #[test]
    fn structure_only_coordinates_are_basis_entries() {
        let g = Graph::from_edges(3, &[(0, 1, None), (1, 2, None)]).unwrap();
        let ag = AugmentedGraph::structure_only(&g);
        let basis = EmbeddingBasis {
            vectors: vec![vec![0.1, 0.2, 0.3], vec![1.0, 2.0, 3.0]],
            singular_values: vec![1.0, 1.0],
            trunc_tol: 0.0,
        };
        let c = block_coordinates(&basis, &ag).unwrap();
        assert_eq!(c.point(1).as_slice(), &[0.2, 2.0]);
        let wrong = EmbeddingBasis {
            vectors: vec![vec![0.0; 5]],
            ..basis
        };
        assert!(matches!(block_coordinates(&wrong, &ag), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn one_attribute_two_vertices_gather() {
        let g = Graph::from_edges(2, &[(0, 1, None)]).unwrap();
        let t = AttributeTable::from_strings(vec!["a".into()], vec![vec!["x".into()], vec!["y".into()]]).unwrap();
        let ag = augment(&g, &t, 1.0).unwrap();
        let basis = EmbeddingBasis {
            vectors: vec![vec![1.0, 2.0, 3.0, 4.0]],
            singular_values: vec![1.0],
            trunc_tol: 0.0,
        };
        let c = block_coordinates(&basis, &ag).unwrap();
        assert_eq!(c.as_slice(), &[1.0, 3.0, 2.0, 4.0]);
    }
}
