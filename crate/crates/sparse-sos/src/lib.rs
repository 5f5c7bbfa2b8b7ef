//! Sparsity-exploiting sums of squares.
//!
//! Certifying `f ≥ 0` through `f = Σ σ_k` with SOS pieces scales badly
//! in the number of variables, so everything here is about shrinking
//! and splitting the Gram matrix before any SDP is solved:
//!
//! * [`newton_basis`] cuts the monomial basis to half the Newton
//!   polytope, in exact rational arithmetic;
//! * [`csp_graph`] / [`csp_cliques`] split the basis along correlative
//!   (variable-level) sparsity;
//! * [`tssos_edges`] / [`cs_tssos_edges`] iterate term-level sparsity
//!   patterns to a fixed point, giving a hierarchy of block structures
//!   between "diagonal" and "dense";
//! * [`gram_sdp`], [`weighted_sos_assemble`] and [`matrix_sos_assemble`]
//!   turn a structure into one coefficient-matching PSD feasibility
//!   problem, for plain, constrained (weighted multiplier) and
//!   matrix-valued decompositions;
//! * [`solve_gram`] decides feasibility by projection sweeps with a
//!   face-restricted polish, routing oversized blocks through the
//!   decomposed ADMM solver first;
//! * [`sos_check`] strings these into one call per strategy.
//!
//! Coefficients stay exact rationals until SDP assembly, so structure
//! decisions (Newton membership, sparsity patterns, symmetries) never
//! depend on floating point.

mod check;
mod csp;
mod error;
mod gram;
mod matrix_sos;
mod newton;
mod poly;
mod solve;
mod tssos;
mod weighted;

pub use check::{sos_check, SosCertificate, SosPiece, Strategy};
pub use csp::{csp_cliques, csp_graph, joint_csp_graph};
pub use error::Error;
pub use gram::{gram_sdp, GramBlock, GramRow, GramSdp};
pub use matrix_sos::{matrix_sos_assemble, matrix_sos_scan, Multiplier, PolyMatrix};
pub use newton::{in_hull, newton_basis};
pub use poly::{parse_rational, Exponent, ExponentSet, Polynomial};
pub use solve::{solve_gram, GramSolution, SolveSettings};
pub use tssos::{
    cs_tssos_edges, pattern_cliques, sign_symmetries, sign_symmetry_orbits,
    term_sparsity_blocks, tssos_edges, SupportExtension,
};
pub use weighted::{
    weighted_sos_assemble, weighted_sos_assemble_with_cliques, SemialgebraicSet,
};
