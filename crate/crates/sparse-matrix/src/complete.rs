use crate::{extract, min_eigenvalue, psd_tolerance, Error, SparseSymMatrix};
use chordal_graph::{is_chordal, maximal_cliques, mcs, CliqueSet, CliqueTree, Partition};
use nalgebra::DMatrix;

/// Outcome of testing a partial matrix for PSD completability.
#[derive(Debug, Clone)]
pub struct CompletionReport {
    /// Smallest eigenvalue of each clique submatrix, clique order.
    pub clique_min_eigs: Vec<f64>,
    /// Tolerance the eigenvalues were compared against.
    pub tolerance: f64,
    /// True when every clique submatrix is PSD within tolerance.
    pub feasible: bool,
}

impl CompletionReport {
    /// Index and eigenvalue of the most infeasible clique, if any.
    pub fn worst(&self) -> Option<(usize, f64)> {
        self.clique_min_eigs
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, e)| e < -self.tolerance)
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Decides PSD completability of a partial symmetric matrix with chordal
/// pattern by checking every maximal clique submatrix.
///
/// `cs` must be exactly the maximal cliques of the pattern of `x` (at
/// block level when a partition is given); a proper subset can miss an
/// infeasible principal submatrix, so mismatches are rejected.
pub fn completion_check(
    x: &SparseSymMatrix,
    cs: &CliqueSet,
    part: Option<&Partition>,
) -> Result<CompletionReport, Error> {
    let scalar_cliques = scalar_cliques(x, cs, part)?;
    let g = match part {
        None => x.pattern().to_graph(),
        Some(p) => {
            // Compare at block level: the scalar pattern must collapse to
            // the block pattern the cliques describe.
            let mut edges = Vec::new();
            for &(i, j) in x.pattern().edges() {
                let (bi, bj) = (p.block_of(i), p.block_of(j));
                if bi != bj {
                    edges.push((bi.min(bj), bi.max(bj)));
                }
            }
            chordal_graph::Graph::from_edges(p.len(), &edges)?
        }
    };
    if !is_chordal(&g) {
        return Err(Error::NotChordal("pattern graph has a chordless cycle".to_string()));
    }
    let maximal = maximal_cliques(&g, &mcs(&g))?;
    let mut found: Vec<&[usize]> = maximal.iter().collect();
    let mut given: Vec<&[usize]> = cs.iter().collect();
    found.sort();
    given.sort();
    if found != given {
        return Err(Error::NotChordal(
            "clique set differs from the maximal cliques of the pattern".to_string(),
        ));
    }

    let tolerance = psd_tolerance(x.max_abs());
    let clique_min_eigs: Vec<f64> =
        scalar_cliques.iter().map(|c| min_eigenvalue(&extract(x, c))).collect();
    let feasible = clique_min_eigs.iter().all(|&e| e >= -tolerance);
    Ok(CompletionReport { clique_min_eigs, tolerance, feasible })
}

/// Fills the unspecified entries of a completable partial matrix with the
/// maximum-determinant PSD completion, walking the clique tree from the
/// roots down and matching each new block against the separator.
pub fn max_det_complete(
    x: &SparseSymMatrix,
    ct: &CliqueTree,
    part: Option<&Partition>,
) -> Result<DMatrix<f64>, Error> {
    let n_blocks = match part {
        None => x.n(),
        Some(p) => p.len(),
    };
    let cs = CliqueSet::new(n_blocks, ct.cliques().iter().map(|c| c.to_vec()).collect())
        .map_err(Error::Graph)?;
    let report = completion_check(x, &cs, part)?;
    if let Some((clique, min_eig)) = report.worst() {
        return Err(Error::InfeasibleCompletion { clique, min_eig });
    }
    complete_on_tree(x, ct, part, report.tolerance)
}

/// Max-determinant completion without re-deriving the clique structure;
/// clique submatrices only need eigenvalues above `-feas_tol`. Intended
/// for iterates that are PSD up to solver accuracy.
pub fn max_det_complete_with_tolerance(
    x: &SparseSymMatrix,
    ct: &CliqueTree,
    part: Option<&Partition>,
    feas_tol: f64,
) -> Result<DMatrix<f64>, Error> {
    let scalar = tree_scalar_cliques(ct, part);
    for (k, c) in scalar.iter().enumerate() {
        let e = min_eigenvalue(&extract(x, c));
        if e < -feas_tol {
            return Err(Error::InfeasibleCompletion { clique: k, min_eig: e });
        }
    }
    complete_on_tree(x, ct, part, feas_tol)
}

fn scalar_cliques(
    x: &SparseSymMatrix,
    cs: &CliqueSet,
    part: Option<&Partition>,
) -> Result<Vec<Vec<usize>>, Error> {
    match part {
        None => {
            if cs.n() != x.n() {
                return Err(Error::DimensionMismatch { expected: x.n(), found: cs.n() });
            }
            Ok(cs.iter().map(|c| c.to_vec()).collect())
        }
        Some(p) => {
            if p.total() != x.n() {
                return Err(Error::DimensionMismatch { expected: x.n(), found: p.total() });
            }
            if cs.n() != p.len() {
                return Err(Error::DimensionMismatch { expected: p.len(), found: cs.n() });
            }
            Ok(cs.iter().map(|c| p.lift_set(c)).collect())
        }
    }
}

fn tree_scalar_cliques(ct: &CliqueTree, part: Option<&Partition>) -> Vec<Vec<usize>> {
    match part {
        None => ct.cliques().iter().map(|c| c.to_vec()).collect(),
        Some(p) => ct.cliques().iter().map(|c| p.lift_set(c)).collect(),
    }
}

fn complete_on_tree(
    x: &SparseSymMatrix,
    ct: &CliqueTree,
    part: Option<&Partition>,
    eig_clip: f64,
) -> Result<DMatrix<f64>, Error> {
    let n = x.n();
    let scalar = tree_scalar_cliques(ct, part);
    let mut m = DMatrix::zeros(n, n);
    let mut placed = vec![false; n];
    for &k in ct.topological() {
        let c = &scalar[k];
        let new: Vec<usize> = c.iter().copied().filter(|&v| !placed[v]).collect();
        if new.is_empty() {
            continue;
        }
        for &u in &new {
            for &v in c {
                m[(u, v)] = x.get(u, v);
                m[(v, u)] = x.get(u, v);
            }
        }
        // Separator with everything already placed; by the induced-path
        // property this is exactly the tree separator, lifted.
        let sep: Vec<usize> = match part {
            None => ct.separator(k).to_vec(),
            Some(p) => p.lift_set(ct.separator(k)),
        };
        let old: Vec<usize> = (0..n).filter(|&v| placed[v] && !c.contains(&v)).collect();
        if !sep.is_empty() && !old.is_empty() {
            let mss = DMatrix::from_fn(sep.len(), sep.len(), |a, b| m[(sep[a], sep[b])]);
            let pinv = clipped_pseudo_inverse(&mss, eig_clip);
            let mus = DMatrix::from_fn(new.len(), sep.len(), |a, b| m[(new[a], sep[b])]);
            let msw = DMatrix::from_fn(sep.len(), old.len(), |a, b| m[(sep[a], old[b])]);
            let fill = mus * pinv * msw;
            for (a, &u) in new.iter().enumerate() {
                for (b, &w) in old.iter().enumerate() {
                    m[(u, w)] = fill[(a, b)];
                    m[(w, u)] = fill[(a, b)];
                }
            }
        }
        for &u in &new {
            placed[u] = true;
        }
    }
    Ok(m)
}

/// Eigenvalue-clipped pseudo-inverse of a symmetric matrix; eigenvalues
/// at or below the clip count as zero.
fn clipped_pseudo_inverse(m: &DMatrix<f64>, clip: f64) -> DMatrix<f64> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let cut = clip.max(1e-12 * eig.eigenvalues.amax().max(1.0));
    let q = &eig.eigenvectors;
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (t, &l) in eig.eigenvalues.iter().enumerate() {
        if l > cut {
            let col = q.column(t);
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    out[(i, j)] += col[i] * col[j] / l;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use chordal_graph::{clique_tree, Graph, Ordering};

    fn chain_setup() -> (CliqueSet, CliqueTree) {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let cs = maximal_cliques(&g, &Ordering::identity(3)).unwrap();
        let ct = clique_tree(&cs);
        (cs, ct)
    }

    #[test]
    fn chain_completion_is_rank_one() {
        let x = SparseSymMatrix::from_triples(
            3,
            &[(0, 0, 1.0), (0, 1, 1.0), (1, 1, 1.0), (1, 2, 1.0), (2, 2, 2.0)],
        )
        .unwrap();
        let (_, ct) = chain_setup();
        let m = max_det_complete(&x, &ct, None).unwrap();
        // Unspecified corner forced by the separator to 1 * (1)^-1 * 1.
        assert!((m[(0, 2)] - 1.0).abs() < 1e-12);
        // The completed matrix keeps the specified entries.
        assert!((m[(2, 2)] - 2.0).abs() < 1e-12);
        // det of the leading 2x2 is 0 and the separator entry is matched,
        // so the completion has a zero eigenvalue.
        assert!(min_eigenvalue(&m).abs() < 1e-10);
    }

    #[test]
    fn chain_completion_published_corner() {
        let x = SparseSymMatrix::from_triples(
            3,
            &[(0, 0, 2.0), (0, 1, 1.0), (1, 1, 0.5), (1, 2, 1.0), (2, 2, 2.0)],
        )
        .unwrap();
        let (_, ct) = chain_setup();
        let m = max_det_complete(&x, &ct, None).unwrap();
        assert!((m[(0, 2)] - 2.0).abs() < 1e-12);
        // Both 2x2 blocks are singular, so the completion is rank one.
        let eig = nalgebra::SymmetricEigen::new(m.clone());
        let big = eig.eigenvalues.iter().filter(|l| l.abs() > 1e-9).count();
        assert_eq!(big, 1);
    }

    #[test]
    fn infeasible_clique_reported() {
        let x = SparseSymMatrix::from_triples(
            3,
            &[(0, 0, 1.0), (0, 1, 3.0), (1, 1, 1.0), (1, 2, 0.0), (2, 2, 1.0)],
        )
        .unwrap();
        let (cs, ct) = chain_setup();
        let rep = completion_check(&x, &cs, None).unwrap();
        assert!(!rep.feasible);
        assert_eq!(rep.worst().unwrap().0, 0);
        assert!(matches!(
            max_det_complete(&x, &ct, None),
            Err(Error::InfeasibleCompletion { clique: 0, .. })
        ));
    }

    #[test]
    fn clique_subset_rejected() {
        // Dropping a maximal clique from the check is unsound and refused.
        let x = SparseSymMatrix::from_triples(
            3,
            &[(0, 0, 1.0), (0, 1, 0.0), (1, 1, 1.0), (1, 2, 0.0), (2, 2, 1.0)],
        )
        .unwrap();
        let cs = CliqueSet::new(3, vec![vec![0, 1]]).unwrap();
        assert!(matches!(completion_check(&x, &cs, None), Err(Error::NotChordal(_))));
    }

    #[test]
    fn nonchordal_pattern_rejected() {
        let mut triples = vec![(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)];
        for i in 0..4 {
            triples.push((i, i, 2.0));
        }
        let x = SparseSymMatrix::from_triples(4, &triples).unwrap();
        let cs = CliqueSet::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        assert!(matches!(completion_check(&x, &cs, None), Err(Error::NotChordal(_))));
    }

    #[test]
    fn completed_inverse_vanishes_off_pattern() {
        // Strictly feasible chain data: the max-det completion is the one
        // whose inverse is supported on the pattern.
        let x = SparseSymMatrix::from_triples(
            3,
            &[(0, 0, 2.0), (0, 1, 0.5), (1, 1, 3.0), (1, 2, -1.0), (2, 2, 1.5)],
        )
        .unwrap();
        let (_, ct) = chain_setup();
        let m = max_det_complete(&x, &ct, None).unwrap();
        let inv = m.try_inverse().unwrap();
        assert!(inv[(0, 2)].abs() < 1e-12);
    }

    #[test]
    fn block_partition_completion() {
        // Two scalar vertices per block on a block chain of 3.
        let p = Partition::new(vec![2, 2, 2]).unwrap();
        let mut triples = Vec::new();
        for i in 0..6 {
            triples.push((i, i, 2.0));
        }
        for (i, j) in [(0, 2), (1, 3), (0, 3), (2, 4), (3, 5), (2, 5), (0, 1), (2, 3), (4, 5)] {
            triples.push((i, j, 0.3));
        }
        let x = SparseSymMatrix::from_triples(6, &triples).unwrap();
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let cs = maximal_cliques(&g, &Ordering::identity(3)).unwrap();
        let ct = clique_tree(&cs);
        let m = max_det_complete(&x, &ct, Some(&p)).unwrap();
        assert!(min_eigenvalue(&m) > 0.0);
        let inv = m.try_inverse().unwrap();
        // Unspecified block (0,2) of the inverse vanishes.
        for i in 0..2 {
            for j in 4..6 {
                assert!(inv[(i, j)].abs() < 1e-10, "inv[{i}][{j}] = {}", inv[(i, j)]);
            }
        }
    }
}
