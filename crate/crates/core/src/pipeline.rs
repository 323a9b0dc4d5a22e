//! End-to-end workflow: augmentation, shifted Laplacian, bootstrap AMG,
//! orthonormal basis, block coordinates, K-means.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::amg::{bootstrap_shared, BootstrapConfig, SmoothVectorSet};
use crate::augment::{augment, AttributeTable, AugmentedGraph};
use crate::clustering::{kmeans_blocks, Clustering, KmeansConfig};
use crate::embedding::{block_coordinates, orthonormal_basis, EmbeddingBasis, VertexCoordinates};
use crate::error::Result;
use crate::graph::{connected_components, shifted_laplacian, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedParams {
    /// Rank-1 shift; `None` uses the average weighted degree.
    pub lambda: Option<f64>,
    pub attr_weight: f64,
    pub trunc_tol: f64,
    pub bootstrap: BootstrapConfig,
}

impl Default for EmbedParams {
    fn default() -> Self {
        Self {
            lambda: None,
            attr_weight: 1.0,
            trunc_tol: 1e-12,
            bootstrap: BootstrapConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Embedding {
    pub augmented: AugmentedGraph,
    pub shift_edge: (usize, usize),
    pub lambda: f64,
    pub smooth: SmoothVectorSet,
    pub rho_history: Vec<f64>,
    pub hierarchy_levels: Vec<usize>,
    pub basis: EmbeddingBasis,
    pub coords: VertexCoordinates,
    pub seconds: f64,
}

impl Embedding {
    /// Number of bootstrap components (= stored smooth vectors).
    pub fn m_components(&self) -> usize {
        self.smooth.len()
    }
}

/// Embed the structure vertices of a connected graph, with optional attributes.
pub fn embed(g: &Graph, attrs: Option<&AttributeTable>, params: &EmbedParams) -> Result<Embedding> {
    let start = Instant::now();
    let augmented = match attrs {
        Some(t) => augment(g, t, params.attr_weight)?,
        None => AugmentedGraph::structure_only(g),
    };
    let (l_s, shift_edge, lambda) = shifted_laplacian(&augmented.graph, params.lambda)?;
    let (solver, smooth) = bootstrap_shared(Arc::new(l_s), &params.bootstrap)?;
    let basis = orthonormal_basis(&smooth, params.trunc_tol)?;
    let coords = block_coordinates(&basis, &augmented)?;
    Ok(Embedding {
        shift_edge,
        lambda,
        rho_history: solver.rho_history.clone(),
        hierarchy_levels: solver.components().iter().map(|h| h.n_levels()).collect(),
        smooth,
        basis,
        coords,
        augmented,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Embed and cluster; modularity is evaluated on the structure graph.
pub fn cluster(g: &Graph, attrs: Option<&AttributeTable>, params: &EmbedParams, kmeans: &KmeansConfig) -> Result<(Embedding, Clustering)> {
    let e = embed(g, attrs, params)?;
    let c = kmeans_blocks(&e.coords, g, kmeans)?;
    Ok((e, c))
}

/// Largest connected component: subgraph, its original vertex ids, and the
/// number of discarded vertices.
pub fn largest_component(g: &Graph) -> (Graph, Vec<usize>, usize) {
    let comps = connected_components(g);
    if comps.count() <= 1 {
        return (g.clone(), (0..g.n()).collect(), 0);
    }
    let keep = comps.largest().to_vec();
    let discarded = g.n() - keep.len();
    (g.induced_subgraph(&keep), keep, discarded)
}
