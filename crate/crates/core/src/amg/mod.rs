//! Bootstrap adaptive algebraic multigrid for the shifted graph Laplacian.
//!
//! Each component is a symmetric V-cycle over a hierarchy built by pairwise
//! matching aggregation driven by one smooth vector. Components compose
//! multiplicatively; the bootstrap appends components until the composite
//! converges fast enough, and the driving vectors span the embedding space.

mod bootstrap;
mod cycle;
mod hierarchy;
mod smoother;

pub use bootstrap::{bootstrap, bootstrap_shared, BootstrapConfig, RhoMode, SmoothVectorSet};
pub use cycle::{composite_apply, smooth_vector, vcycle_apply, CompositeSolver, Preconditioner};
pub use hierarchy::{
    build_hierarchy, build_hierarchy_shared, matching_weight, pairwise_aggregation, AmgHierarchy, AmgParams,
    Level, Prolongator,
};
pub use smoother::{smooth_in_place, smoother_apply, Direction, SmootherConfig, SmootherKind};
