use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // graph construction
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex index {index} out of range for graph with {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(usize, usize, f64),
    #[error("graph is not connected ({0} components)")]
    DisconnectedInput(usize),
    #[error("edge ({0}, {1}) is not present")]
    EdgeNotPresent(usize, usize),
    #[error("shift parameter must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("graph has no edges")]
    EmptyGraph,

    // attributes
    #[error("attribute table has no rows")]
    EmptyTable,
    #[error("attribute table has {table} rows but graph has {graph} vertices")]
    RowCountMismatch { table: usize, graph: usize },

    // numerical
    #[error("zero or negative diagonal entry at row {0}")]
    ZeroDiagonal(usize),
    #[error("coarsest-level matrix is singular")]
    SingularCoarsest,
    #[error("composite solver has no components")]
    EmptyComposite,
    #[error("matrix is not positive definite (quadratic form {0:e})")]
    NotSpd(f64),
    #[error("all smooth vectors are zero")]
    AllVectorsZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),

    // clustering and metrics
    #[error("K = {k} is invalid for {n} points")]
    KTooLarge { k: usize, n: usize },
    #[error("all points have identical coordinates; cannot form {0} clusters")]
    DegenerateCoordinates(usize),
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
    #[error("partitions cover different vertex sets: {0}")]
    VertexSetMismatch(String),

    // generators
    #[error("infeasible degrees: {0}")]
    InfeasibleDegrees(String),
    #[error("infeasible model: {0}")]
    InfeasibleSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 usage, 2 data, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Usage(_) | InvalidParameter(_) | KTooLarge { .. } => 1,
            ZeroDiagonal(_) | SingularCoarsest | EmptyComposite | NotSpd(_) | AllVectorsZero
            | DegenerateCoordinates(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
