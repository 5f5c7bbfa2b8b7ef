//! Standard-form SDP data model and sparsity-exploiting reformulations.
//!
//! The pipeline starts from [`SdpProblem`] (cost, constraint matrices,
//! right-hand side, optional block structure), finds the joint support of
//! all data matrices with [`aggregate_pattern`], and covers a chordal
//! extension of it by maximal cliques. [`domain_decompose`] and
//! [`range_decompose`] package that structure for the operator-splitting
//! solver; [`clique_tree_convert`] instead rewrites the problem as a
//! standard-form SDP over a product of clique cones with explicit overlap
//! consistency rows, suitable for any solver.
//!
//! The crate also hosts SDPA sparse-format I/O, the Shor relaxation of
//! QCQPs, and generators for Max-Cut and networked Lyapunov feasibility
//! problems used throughout the test suites.

mod convert;
mod decompose;
mod error;
mod gen;
mod problem;
mod qcqp;
mod sdpa;

pub use convert::{clique_tree_convert, ConvertedSdp};
pub use decompose::{aggregate_pattern, domain_decompose, range_decompose, DecomposedSdp, Mode};
pub use error::Error;
pub use gen::{gen_lyapunov, gen_maxcut, random_network_system, LYAPUNOV_MARGIN};
pub use problem::SdpProblem;
pub use qcqp::{qcqp_relax, ConstraintKind, Qcqp, QuadForm};
pub use sdpa::{sdpa_from_str, sdpa_read, sdpa_to_string, sdpa_write};
