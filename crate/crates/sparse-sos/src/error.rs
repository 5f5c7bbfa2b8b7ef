use crate::poly::Exponent;

#[derive(Debug)]
pub enum Error {
    /// Sum-of-squares questions only make sense at even degree.
    OddDegree { degree: u32 },
    /// Terms of the target that no admissible product of basis monomials
    /// can reach. Listed in lexicographic order.
    SupportNotCovered { uncovered: Vec<Exponent> },
    /// A constraint's variables fit inside no variable clique, so its
    /// multiplier cannot be localized.
    ConstraintOutsideClique { constraint: usize },
    /// The clique cover of the matrix rows induces a non-chordal graph.
    NotChordal,
    /// Matrix input differs from its transpose at the given entry.
    Asymmetric { row: usize, col: usize },
    /// The coefficient-matching problem admits no PSD solution within
    /// iteration limits; `residual` is the best max-norm coefficient
    /// mismatch reached by a PSD iterate.
    Infeasible { residual: f64 },
    /// Relaxation order too small for the degrees involved.
    OrderTooSmall { needed: u32, given: u32 },
    /// Mixed variable counts or malformed component sizes.
    Shape(String),
    Parse { line: usize, msg: String },
    Graph(chordal_graph::Error),
    Solver(admm_solver::Error),
    Model(sdp_model::Error),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::OddDegree { degree } => {
                write!(f, "degree {degree} is odd, so the polynomial cannot be a sum of squares")
            }
            Error::SupportNotCovered { uncovered } => {
                write!(f, "{} support term(s) outside the candidate products, first {}",
                    uncovered.len(), uncovered[0])
            }
            Error::ConstraintOutsideClique { constraint } => {
                write!(f, "constraint {constraint} involves variables from several cliques")
            }
            Error::NotChordal => write!(f, "row clique cover is not chordal"),
            Error::Asymmetric { row, col } => {
                write!(f, "matrix entries ({row},{col}) and ({col},{row}) differ")
            }
            Error::Infeasible { residual } => {
                write!(f, "no PSD Gram solution found (coefficient residual {residual:.3e})")
            }
            Error::OrderTooSmall { needed, given } => {
                write!(f, "relaxation order {given} below the minimum {needed}")
            }
            Error::Shape(msg) => write!(f, "{msg}"),
            Error::Parse { line, msg } => write!(f, "line {line}: {msg}"),
            Error::Graph(e) => write!(f, "{e}"),
            Error::Solver(e) => write!(f, "{e}"),
            Error::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<chordal_graph::Error> for Error {
    fn from(e: chordal_graph::Error) -> Self {
        Error::Graph(e)
    }
}

impl From<admm_solver::Error> for Error {
    fn from(e: admm_solver::Error) -> Self {
        Error::Solver(e)
    }
}

impl From<sdp_model::Error> for Error {
    fn from(e: sdp_model::Error) -> Self {
        Error::Model(e)
    }
}
