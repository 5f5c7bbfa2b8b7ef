use sdp_model::Mode;

#[derive(Debug)]
pub enum Error {
    /// Solver called on a decomposition of the other kind.
    WrongMode { expected: Mode, found: Mode },
    /// Projection input deviates from symmetry beyond roundoff.
    NotSymmetric { max_dev: f64 },
    /// A D^{-1} A' is rank-deficient; `constraint` is a row involved in
    /// the first dependency the factorization hits.
    SingularKkt { constraint: usize },
    InvalidSettings(String),
    Matrix(sparse_matrix::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::WrongMode { expected, found } => {
                write!(f, "{expected}-space solver called on a {found}-space decomposition")
            }
            Error::NotSymmetric { max_dev } => {
                write!(f, "projection input is not symmetric (max deviation {max_dev:e})")
            }
            Error::SingularKkt { constraint } => {
                write!(f, "KKT matrix is singular: constraint {} is linearly dependent", constraint + 1)
            }
            Error::InvalidSettings(msg) => write!(f, "invalid settings: {msg}"),
            Error::Matrix(e) => write!(f, "{e}"),
            Error::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for Error {}

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
