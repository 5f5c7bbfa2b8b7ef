use std::fmt;

/// Errors produced by graph construction, parsing and ordering checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Vertex index is outside `0..n`.
    VertexOutOfRange { vertex: usize, n: usize },
    /// Self-loops are not representable.
    SelfLoop(usize),
    /// An ordering or partition does not match the graph dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// The given sequence is not a permutation of `0..n`.
    NotPermutation(String),
    /// An ordering fails the perfect-elimination check; `vertex` is the
    /// eliminated vertex whose later neighborhood misses edge `missing`.
    NotPerfectOrdering { vertex: usize, missing: (usize, usize) },
    /// A clique list violates the clique-set invariants.
    InvalidCliqueSet(String),
    /// Text input could not be parsed; line numbers are 1-based.
    Parse { line: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for graph on {n} vertices")
            }
            Error::SelfLoop(v) => write!(f, "self-loop at vertex {v} is not allowed"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotPermutation(msg) => write!(f, "not a permutation: {msg}"),
            Error::NotPerfectOrdering { vertex, missing } => write!(
                f,
                "not a perfect elimination ordering: later neighbors {} and {} of vertex {} are not adjacent",
                missing.0, missing.1, vertex
            ),
            Error::InvalidCliqueSet(msg) => write!(f, "invalid clique set: {msg}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
