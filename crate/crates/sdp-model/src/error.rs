use std::fmt;

#[derive(Debug)]
pub enum Error {
    Graph(chordal_graph::Error),
    Matrix(sparse_matrix::Error),
    DimensionMismatch { expected: usize, found: usize },
    /// Structurally invalid problem data (asymmetry, bad block layout, ...).
    Invalid(String),
    Parse { line: usize, msg: String },
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Graph(e) => write!(f, "graph error: {e}"),
            Error::Matrix(e) => write!(f, "matrix error: {e}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Invalid(msg) => write!(f, "invalid problem: {msg}"),
            Error::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<chordal_graph::Error> for Error {
    fn from(e: chordal_graph::Error) -> Self {
        Error::Graph(e)
    }
}

impl From<sparse_matrix::Error> for Error {
    fn from(e: sparse_matrix::Error) -> Self {
        Error::Matrix(e)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
