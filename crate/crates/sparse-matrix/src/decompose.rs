use crate::{sparse_cholesky, Error, SparseSymMatrix, SparsityPattern};
use chordal_graph::{CliqueSet, Ordering, Partition};
use nalgebra::DMatrix;

/// A sparse PSD matrix written as a sum of PSD terms, one per clique,
/// each supported on its clique's rows and columns.
#[derive(Debug, Clone)]
pub struct CliqueDecomposition {
    n: usize,
    cliques: Vec<Vec<usize>>,
    terms: Vec<DMatrix<f64>>,
}

impl CliqueDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Scalar-level index sets the terms live on.
    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    /// Dense `|C_k| x |C_k|` PSD term of clique `k`.
    pub fn term(&self, k: usize) -> &DMatrix<f64> {
        &self.terms[k]
    }

    pub fn terms(&self) -> &[DMatrix<f64>] {
        &self.terms
    }

    /// Sums the inflated terms back to a sparse matrix on the union of
    /// the clique patterns.
    pub fn reconstruct(&self) -> SparseSymMatrix {
        let pattern = SparsityPattern::cover(self.n, &self.cliques).expect("cliques are in range");
        let mut out = SparseSymMatrix::zeros(pattern);
        for (c, t) in self.cliques.iter().zip(&self.terms) {
            crate::add_inflated(&mut out, t, c).expect("term fits the union pattern");
        }
        out
    }
}

/// Splits a PSD matrix with chordal pattern into per-clique PSD terms by
/// assigning each zero-fill Cholesky column to the first clique that
/// contains its nonzero rows.
///
/// `cs` and `ord` describe a chordal cover of the pattern of `z`; with a
/// partition, they live at block level and `z` at scalar level.
pub fn chordal_decompose(
    z: &SparseSymMatrix,
    cs: &CliqueSet,
    ord: &Ordering,
    part: Option<&Partition>,
) -> Result<CliqueDecomposition, Error> {
    let (scalar_cliques, scalar_ord) = match part {
        None => {
            if cs.n() != z.n() {
                return Err(Error::DimensionMismatch { expected: z.n(), found: cs.n() });
            }
            (cs.iter().map(|c| c.to_vec()).collect::<Vec<_>>(), ord.clone())
        }
        Some(p) => {
            if p.total() != z.n() {
                return Err(Error::DimensionMismatch { expected: z.n(), found: p.total() });
            }
            if cs.n() != p.len() {
                return Err(Error::DimensionMismatch { expected: p.len(), found: cs.n() });
            }
            let lifted = cs.iter().map(|c| p.lift_set(c)).collect::<Vec<_>>();
            let mut order = Vec::with_capacity(p.total());
            for k in 0..p.len() {
                order.extend(p.range(ord.vertex_at(k)));
            }
            (lifted, Ordering::new(order).expect("block order lifts to a permutation"))
        }
    };

    let cover = SparsityPattern::cover(z.n(), &scalar_cliques)?;
    if !z.pattern().is_subset_of(&cover) {
        return Err(Error::NotChordal(
            "matrix pattern is not covered by the clique set".to_string(),
        ));
    }
    let mut filled = SparseSymMatrix::zeros(cover);
    for (i, j, v) in z.entries() {
        filled.set(i, j, v).expect("covered entry");
    }
    let fac = match sparse_cholesky(&filled, &scalar_ord) {
        Ok(f) => f,
        Err(Error::Graph(e)) => {
            return Err(Error::NotChordal(format!("ordering is not perfect for the cover: {e}")))
        }
        Err(e) => return Err(e),
    };

    let mut terms: Vec<DMatrix<f64>> =
        scalar_cliques.iter().map(|c| DMatrix::zeros(c.len(), c.len())).collect();
    // Position of each vertex inside each clique, for scatter.
    let mut slot = vec![vec![usize::MAX; 0]; 0];
    slot.resize_with(scalar_cliques.len(), || vec![usize::MAX; z.n()]);
    for (k, c) in scalar_cliques.iter().enumerate() {
        for (a, &v) in c.iter().enumerate() {
            slot[k][v] = a;
        }
    }

    for k in 0..z.n() {
        let col: Vec<(usize, f64)> = fac
            .column(k)
            .filter(|&(i, v)| i == k || v != 0.0)
            .map(|(i, v)| (scalar_ord.vertex_at(i), v))
            .collect();
        let mut support: Vec<usize> = col.iter().map(|&(v, _)| v).collect();
        support.sort_unstable();
        let target = match first_containing(&scalar_cliques, &support) {
            Some(t) => t,
            None => {
                return Err(Error::NotChordal(format!(
                    "no clique contains the elimination column of vertex {}",
                    support[0] + 1
                )))
            }
        };
        let t = &mut terms[target];
        for (a, &(vi, li)) in col.iter().enumerate() {
            for &(vj, lj) in &col[a..] {
                let si = slot[target][vi];
                let sj = slot[target][vj];
                t[(si, sj)] += li * lj;
                if si != sj {
                    t[(sj, si)] += li * lj;
                }
            }
        }
    }

    Ok(CliqueDecomposition { n: z.n(), cliques: scalar_cliques, terms })
}

fn first_containing(cliques: &[Vec<usize>], set: &[usize]) -> Option<usize> {
    cliques.iter().position(|c| set.iter().all(|v| c.binary_search(v).is_ok()))
}
