//! Symmetric vectorization over a fixed sparsity pattern.
//!
//! Coordinates follow [`SparsityPattern::entry_list`]; off-diagonal
//! entries carry a factor √2 so the Frobenius inner product of two
//! symmetric matrices equals the dot product of their coordinate
//! vectors. Per-clique extraction then becomes a plain index gather,
//! and the X-update Hessian is exactly ρ times the diagonal matrix of
//! clique-membership counts.

use std::f64::consts::SQRT_2;

use chordal_graph::CliqueSet;
use nalgebra::DMatrix;
use sparse_matrix::{SparseSymMatrix, SparsityPattern};

pub(crate) struct SvecLayout {
    entries: Vec<(usize, usize)>,
    pattern: SparsityPattern,
}

impl SvecLayout {
    pub fn new(pattern: SparsityPattern) -> Self {
        SvecLayout { entries: pattern.entry_list(), pattern }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.entries.binary_search(&key).ok()
    }

    /// Sparse coordinates of a data matrix. Numeric nonzeros outside the
    /// layout pattern are a caller bug; the decomposition pattern always
    /// contains the aggregate sparsity.
    pub fn vectorize(&self, m: &SparseSymMatrix) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for (i, j, v) in m.entries() {
            if v == 0.0 {
                continue;
            }
            let t = self.index(i, j).expect("data entry outside the decomposition pattern");
            out.push((t, if i == j { v } else { SQRT_2 * v }));
        }
        out.sort_unstable_by_key(|&(t, _)| t);
        out
    }

    pub fn to_matrix(&self, x: &[f64]) -> SparseSymMatrix {
        let mut m = SparseSymMatrix::zeros(self.pattern.clone());
        for (t, &(i, j)) in self.entries.iter().enumerate() {
            let v = if i == j { x[t] } else { x[t] / SQRT_2 };
            m.set(i, j, v).expect("layout entry is on its own pattern");
        }
        m
    }
}

/// Gather map from global svec coordinates to one clique's local svec.
///
/// Local coordinates run over the upper triangle of the clique submatrix
/// row by row, matching [`svec_to_mat`] and [`mat_to_svec`].
pub(crate) struct CliqueMap {
    pub size: usize,
    pub gather: Vec<usize>,
}

impl CliqueMap {
    fn new(layout: &SvecLayout, clique: &[usize]) -> Self {
        let nc = clique.len();
        let mut gather = Vec::with_capacity(nc * (nc + 1) / 2);
        for a in 0..nc {
            for b in a..nc {
                let g = layout
                    .index(clique[a], clique[b])
                    .expect("clique pair outside the decomposition pattern");
                gather.push(g);
            }
        }
        CliqueMap { size: nc, gather }
    }

    pub fn svec_dim(&self) -> usize {
        self.gather.len()
    }

    /// w = H x (local slice of the global point).
    pub fn gather_into(&self, x: &[f64], w: &mut [f64]) {
        for (t, &g) in self.gather.iter().enumerate() {
            w[t] = x[g];
        }
    }

}

pub(crate) fn clique_maps(layout: &SvecLayout, cs: &CliqueSet) -> Vec<CliqueMap> {
    cs.iter().map(|c| CliqueMap::new(layout, c)).collect()
}

/// Diagonal of D = Σ H'H: how many cliques cover each coordinate.
pub(crate) fn membership_counts(layout: &SvecLayout, maps: &[CliqueMap]) -> Vec<f64> {
    let mut d = vec![0.0; layout.dim()];
    for m in maps {
        for &g in &m.gather {
            d[g] += 1.0;
        }
    }
    debug_assert!(d.iter().all(|&v| v >= 1.0), "cliques must cover the pattern");
    d
}

pub(crate) fn svec_to_mat(nc: usize, w: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(nc, nc);
    let mut t = 0;
    for a in 0..nc {
        for b in a..nc {
            let v = if a == b { w[t] } else { w[t] / SQRT_2 };
            m[(a, b)] = v;
            m[(b, a)] = v;
            t += 1;
        }
    }
    m
}

pub(crate) fn mat_to_svec(m: &DMatrix<f64>, w: &mut [f64]) {
    let nc = m.nrows();
    let mut t = 0;
    for a in 0..nc {
        for b in a..nc {
            w[t] = if a == b { m[(a, a)] } else { SQRT_2 * m[(a, b)] };
            t += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chordal_graph::Graph;

    fn chain_layout(n: usize) -> SvecLayout {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        SvecLayout::new(SparsityPattern::from_graph(&Graph::from_edges(n, &edges).unwrap()))
    }

    #[test]
    fn inner_product_matches_frobenius() {
        let layout = chain_layout(4);
        let a = SparseSymMatrix::from_triples(
            4,
            &[(0, 0, 1.0), (0, 1, -2.0), (1, 2, 0.5), (3, 3, 4.0)],
        )
        .unwrap();
        let x = SparseSymMatrix::from_triples(
            4,
            &[(0, 0, 2.0), (0, 1, 1.5), (1, 1, -1.0), (2, 3, 3.0)],
        )
        .unwrap();
        let av = layout.vectorize(&a);
        let mut xv = vec![0.0; layout.dim()];
        for (t, v) in layout.vectorize(&x) {
            xv[t] = v;
        }
        let dot: f64 = av.iter().map(|&(t, v)| v * xv[t]).sum();
        assert!((dot - a.inner(&x)).abs() < 1e-14);
    }

    #[test]
    fn matrix_round_trip() {
        let layout = chain_layout(3);
        let x = SparseSymMatrix::from_triples(3, &[(0, 0, 1.0), (0, 1, -0.5), (1, 2, 2.0)]).unwrap();
        let mut xv = vec![0.0; layout.dim()];
        for (t, v) in layout.vectorize(&x) {
            xv[t] = v;
        }
        let back = layout.to_matrix(&xv);
        for (i, j, v) in x.entries() {
            assert!((back.get(i, j) - v).abs() < 1e-15);
        }
    }

    #[test]
    fn membership_counts_on_chain() {
        let layout = chain_layout(3);
        let cs = CliqueSet::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let maps = clique_maps(&layout, &cs);
        let d = membership_counts(&layout, &maps);
        // Vertex 1 sits in both cliques; everything else in one.
        let shared = layout.index(1, 1).unwrap();
        for (g, &count) in d.iter().enumerate() {
            assert_eq!(count, if g == shared { 2.0 } else { 1.0 });
        }
    }

    #[test]
    fn clique_gather_round_trip() {
        let layout = chain_layout(4);
        let cs = CliqueSet::new(4, vec![vec![1, 2]]).unwrap();
        let maps = clique_maps(&layout, &cs);
        let x: Vec<f64> = (0..layout.dim()).map(|t| t as f64).collect();
        let mut w = vec![0.0; maps[0].svec_dim()];
        maps[0].gather_into(&x, &mut w);
        let m = svec_to_mat(2, &w);
        let mut back = vec![0.0; 3];
        mat_to_svec(&m, &mut back);
        assert_eq!(w, back);
    }
}
