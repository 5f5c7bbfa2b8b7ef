//! Cached factorization of the normal matrix S = A D⁻¹ Aᵀ.
//!
//! S is independent of the penalty ρ, so a single factorization serves
//! the whole solve even when the penalty adapts. Two constraints couple
//! in S only when their supports overlap, so S inherits the problem's
//! interaction structure; factoring on a minimum-degree chordal
//! extension keeps the work near-linear on network-shaped instances
//! instead of cubic in the constraint count.

use std::collections::BTreeMap;

use chordal_graph::{chordal_extension, mcs, ExtensionHeuristic, Graph};
use sparse_matrix::{sparse_cholesky, CholeskyFactor, SparseSymMatrix, SparsityPattern};

use crate::error::Error;

pub(crate) struct KktSystem {
    factor: Option<CholeskyFactor>,
}

impl KktSystem {
    pub fn assemble(avecs: &[Vec<(usize, f64)>], dinv: &[f64], dim: usize) -> Result<Self, Error> {
        let m = avecs.len();
        if m == 0 {
            return Ok(KktSystem { factor: None });
        }
        let mut rows_at: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        for (i, a) in avecs.iter().enumerate() {
            for &(g, v) in a {
                rows_at[g].push((i, v));
            }
        }
        let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (g, rows) in rows_at.iter().enumerate() {
            for (p, &(r, vr)) in rows.iter().enumerate() {
                for &(s, vs) in &rows[p..] {
                    *entries.entry((r, s)).or_insert(0.0) += vr * vs * dinv[g];
                }
            }
        }
        let edges: Vec<(usize, usize)> =
            entries.keys().filter(|&&(r, s)| r != s).copied().collect();
        let graph = Graph::from_edges(m, &edges).expect("constraint indices are in range");
        let ext = chordal_extension(&graph, ExtensionHeuristic::MinDegree);
        let ord = mcs(&ext);
        let mut smat = SparseSymMatrix::zeros(SparsityPattern::from_graph(&ext));
        for (&(r, s), &v) in &entries {
            smat.set(r, s, v).expect("extension contains the support");
        }
        let factor = match sparse_cholesky(&smat, &ord) {
            Ok(f) => f,
            Err(sparse_matrix::Error::NotPositiveSemidefinite { pivot_index, .. }) => {
                return Err(Error::SingularKkt { constraint: ord.vertex_at(pivot_index) });
            }
            Err(e) => return Err(Error::Matrix(e)),
        };
        if let Some(k) = factor.pivots().iter().position(|&d| d <= 0.0) {
            // A zero pivot the factorization admitted marks a row that is
            // a combination of earlier ones.
            return Err(Error::SingularKkt { constraint: factor.ordering().vertex_at(k) });
        }
        Ok(KktSystem { factor: Some(factor) })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match &self.factor {
            None => Vec::new(),
            Some(f) => f.solve(rhs).expect("pivots were checked at assembly"),
        }
    }
}
