//! Chordal graph machinery for sparse matrix decompositions.
//!
//! A graph is chordal when every cycle of length four or more has a
//! chord. Chordal graphs admit perfect elimination orderings, found in
//! linear time by maximum cardinality search, and their maximal cliques
//! (at most `n` of them) organize into a clique tree whose separators
//! drive decomposition and completion of sparse symmetric matrices.
//!
//! This crate provides the purely combinatorial layer:
//!
//! * [`Graph`] with a small text format,
//! * [`mcs`], [`verify_peo`], [`is_chordal`],
//! * [`chordal_extension`] with three fill heuristics,
//! * [`maximal_cliques`], [`CliqueSet`], [`clique_tree`], [`CliqueTree`],
//!   [`merge_cliques`],
//! * [`Partition`] and [`lift_partition_graph`] for block-structured
//!   (matrix-valued) sparsity.

mod cliques;
mod error;
mod extension;
mod graph;
mod order;
mod partition;
mod tree;

pub use cliques::{all_maximal_cliques, maximal_cliques, CliqueSet};
pub use error::Error;
pub use extension::{chordal_extension, ExtensionHeuristic};
pub use graph::Graph;
pub use order::{is_chordal, mcs, peo_witness, verify_peo, Ordering};
pub use partition::{lift_partition_graph, Partition};
pub use tree::{clique_tree, merge_cliques, CliqueTree};
