use std::fmt;

/// Errors from sparse symmetric matrix arithmetic, factorization,
/// decomposition and completion.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Wrapped combinatorial error (bad ordering, bad clique set, ...).
    Graph(chordal_graph::Error),
    /// Matrix dimensions or patterns do not match.
    DimensionMismatch { expected: usize, found: usize },
    /// Attempted to write an entry outside the sparsity pattern.
    EntryOutsidePattern { i: usize, j: usize },
    /// A Cholesky pivot fell below the negative tolerance.
    NotPositiveSemidefinite { pivot_index: usize, pivot: f64 },
    /// An operation needing strict positive definiteness met a zero pivot.
    NotPositiveDefinite { pivot_index: usize },
    /// The pattern is not chordal, or the supplied cliques do not match
    /// its maximal cliques.
    NotChordal(String),
    /// Clique submatrices are not all positive semidefinite, so no
    /// positive semidefinite completion exists.
    InfeasibleCompletion { clique: usize, min_eig: f64 },
    /// Text input could not be parsed; line numbers are 1-based.
    Parse { line: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Graph(e) => write!(f, "{e}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EntryOutsidePattern { i, j } => {
                write!(f, "entry ({i}, {j}) lies outside the sparsity pattern")
            }
            Error::NotPositiveSemidefinite { pivot_index, pivot } => write!(
                f,
                "matrix is not positive semidefinite: pivot {pivot:.3e} at elimination step {pivot_index}"
            ),
            Error::NotPositiveDefinite { pivot_index } => {
                write!(f, "matrix is not positive definite: zero pivot at elimination step {pivot_index}")
            }
            Error::NotChordal(msg) => write!(f, "not a chordal structure: {msg}"),
            Error::InfeasibleCompletion { clique, min_eig } => write!(
                f,
                "no positive semidefinite completion: clique {clique} has minimum eigenvalue {min_eig:.3e}"
            ),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<chordal_graph::Error> for Error {
    fn from(e: chordal_graph::Error) -> Self {
        Error::Graph(e)
    }
}
