//! Clustering of vertex-attributed undirected graphs.
//!
//! The graph is augmented with one vertex per distinct attribute value,
//! embedded in the span of algebraically smooth vectors produced by a
//! bootstrap AMG solver for the shifted Laplacian, and the structure vertices
//! are then partitioned by K-means under a block vector-valued distance.

pub mod amg;
pub mod augment;
pub mod cli;
pub mod clustering;
pub mod config;
pub mod embedding;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod partition;
pub mod pipeline;
pub mod rng;
pub mod sparse;

pub use augment::{augment, compute_domains, AttributeDomain, AttributeTable, AugmentedGraph};
pub use clustering::{kmeans_blocks, kmeans_objective, Clustering, KmeansConfig};
pub use embedding::{block_coordinates, block_distance, orthonormal_basis, BlockPoint, EmbeddingBasis, VertexCoordinates};
pub use error::{Error, Result};
pub use graph::{connected_components, laplacian, spd_shift, ComponentLabels, Graph};
pub use partition::Partition;
pub use pipeline::{cluster, embed, largest_component, EmbedParams, Embedding};
pub use sparse::{CsrMatrix, SparseSymMatrix};
