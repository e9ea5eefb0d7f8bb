use std::path::PathBuf;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("no spanning trees: graph is disconnected")]
    Disconnected,
    #[error("graph numerically disconnected (non-positive pivot {pivot:e} at elimination step {step})")]
    NumericallyDisconnected { step: usize, pivot: f64 },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge endpoint {0} is not a vertex of the graph")]
    DanglingEndpoint(VertexId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("directed graphs are not supported")]
    Directed,
    #[error("parse error at line {line}{}: {message}", field.as_ref().map(|f| format!(", field `{f}`")).unwrap_or_default())]
    Parse {
        line: usize,
        field: Option<String>,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row} does not match the header schema: {message}")]
    SchemaMismatch { row: usize, message: String },
    #[error("invalid balance rule: {0}")]
    InvalidRule(String),
    #[error("graph has {count} spanning trees, above the enumeration limit {limit}; use the Monte Carlo estimator")]
    TooManySpanningTrees { count: u128, limit: u128 },
    #[error("trial cap of {cap} exceeded after {successes} successes in {trials} trials")]
    TrialCapExceeded {
        cap: u64,
        successes: u64,
        trials: u64,
    },
    #[error("all points are collinear")]
    Collinear,
    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("stage `{0}` requires vertex coordinates")]
    MissingCoordinates(String),
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),
    #[error("no base b in (1, 1e6] reaches average degree {target} for n = {n}")]
    BracketNotFound { n: usize, target: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sample {index} is not positive (n = {n}, p = {p})")]
    NonPositiveSample { index: usize, n: f64, p: f64 },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by numerics or Monte Carlo budgets rather
    /// than malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericallyDisconnected { .. }
                | Error::TrialCapExceeded { .. }
                | Error::BracketNotFound { .. }
                | Error::TooManySpanningTrees { .. }
        )
    }
}
