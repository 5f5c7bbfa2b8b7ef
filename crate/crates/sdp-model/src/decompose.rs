use crate::SdpProblem;
use chordal_graph::{
    chordal_extension, clique_tree, is_chordal, maximal_cliques, mcs, merge_cliques, CliqueSet,
    CliqueTree, ExtensionHeuristic, Ordering,
};
use sparse_matrix::SparsityPattern;

/// Which side of the SDP the clique cones replace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Primal matrix variable split into overlapping clique submatrices
    /// `X_k = E_k X E_k'`.
    Domain,
    /// Dual slack built from clique-supported terms
    /// `sum_i y_i A_i + sum_k E_k' V_k E_k = C`.
    Range,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Domain => write!(f, "domain"),
            Mode::Range => write!(f, "range"),
        }
    }
}

/// An SDP together with a chordal cover of its aggregate sparsity and the
/// clique structure a decomposed solver operates on.
#[derive(Debug, Clone)]
pub struct DecomposedSdp {
    base: SdpProblem,
    pattern: SparsityPattern,
    cliques: CliqueSet,
    tree: CliqueTree,
    ordering: Ordering,
    mode: Mode,
}

impl DecomposedSdp {
    pub fn base(&self) -> &SdpProblem {
        &self.base
    }

    /// Chordally extended pattern; contains the aggregate sparsity.
    pub fn pattern(&self) -> &SparsityPattern {
        &self.pattern
    }

    pub fn cliques(&self) -> &CliqueSet {
        &self.cliques
    }

    pub fn tree(&self) -> &CliqueTree {
        &self.tree
    }

    /// Perfect elimination ordering of the extended pattern.
    pub fn ordering(&self) -> &Ordering {
        &self.ordering
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Rebuilds the clique structure after merging cliques whose union is
    /// cheap enough under the given threshold.
    pub fn merged(self, threshold: f64) -> DecomposedSdp {
        let merged = merge_cliques(&self.tree, threshold);
        let pattern = SparsityPattern::from_cliques(&merged);
        let g = pattern.to_graph();
        debug_assert!(is_chordal(&g));
        let ordering = mcs(&g);
        let cliques = maximal_cliques(&g, &ordering).expect("merged cover stays chordal");
        let tree = clique_tree(&cliques);
        DecomposedSdp { base: self.base, pattern, cliques, tree, ordering, mode: self.mode }
    }
}

/// Union of the numeric supports of the cost and constraint matrices.
pub fn aggregate_pattern(p: &SdpProblem) -> SparsityPattern {
    let mut edges = Vec::new();
    let mut collect = |m: &sparse_matrix::SparseSymMatrix| {
        for (i, j, v) in m.entries() {
            if i != j && v != 0.0 {
                edges.push((i, j));
            }
        }
    };
    collect(p.c());
    for ai in p.a() {
        collect(ai);
    }
    SparsityPattern::from_edges(p.n(), &edges).expect("supports are in range")
}

/// Replaces the primal cone constraint by coupled clique cones over a
/// chordal extension of the aggregate pattern.
pub fn domain_decompose(p: SdpProblem, ext: ExtensionHeuristic) -> DecomposedSdp {
    decompose(p, ext, Mode::Domain)
}

/// Range-space analogue: the dual slack is written as a sum of
/// clique-supported PSD terms over the same chordal extension.
pub fn range_decompose(p: SdpProblem, ext: ExtensionHeuristic) -> DecomposedSdp {
    decompose(p, ext, Mode::Range)
}

fn decompose(p: SdpProblem, ext: ExtensionHeuristic, mode: Mode) -> DecomposedSdp {
    let agg = aggregate_pattern(&p);
    let extended = chordal_extension(&agg.to_graph(), ext);
    let ordering = mcs(&extended);
    let cliques = maximal_cliques(&extended, &ordering).expect("extension is chordal");
    let tree = clique_tree(&cliques);
    let pattern = SparsityPattern::from_graph(&extended);
    DecomposedSdp { base: p, pattern, cliques, tree, ordering, mode }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sparse_matrix::SparseSymMatrix;

    /// 3x3 LMI with chain sparsity, written in dual standard form: the
    /// slack C - x1*A1 - x2*A2 reproduces
    /// [[2x1, x1+x2, 0], [x1+x2, 5-x1-x2, x1], [0, x1, x2+1]].
    pub(crate) fn chain_lmi() -> SdpProblem {
        let c = SparseSymMatrix::from_triples(3, &[(1, 1, 5.0), (2, 2, 1.0)]).unwrap();
        let a1 = SparseSymMatrix::from_triples(
            3,
            &[(0, 0, -2.0), (0, 1, -1.0), (1, 1, 1.0), (1, 2, -1.0)],
        )
        .unwrap();
        let a2 =
            SparseSymMatrix::from_triples(3, &[(0, 1, -1.0), (1, 1, 1.0), (2, 2, -1.0)]).unwrap();
        SdpProblem::new(c, vec![a1, a2], vec![0.0, 0.0], None).unwrap()
    }

    #[test]
    fn chain_lmi_aggregate_and_cliques() {
        let p = chain_lmi();
        let agg = aggregate_pattern(&p);
        assert_eq!(agg.edges(), &[(0, 1), (1, 2)]);
        let d = domain_decompose(p, ExtensionHeuristic::McsFill);
        assert_eq!(d.mode(), Mode::Domain);
        // MCS seeds the back of the ordering at vertex 0, so the clique of
        // the chain's far end is enumerated first.
        let cl: Vec<_> = d.cliques().iter().collect();
        assert_eq!(cl, vec![&[1, 2][..], &[0, 1][..]]);
        assert!(agg.is_subset_of(d.pattern()));
    }

    #[test]
    fn range_mode_shares_structure() {
        let p = chain_lmi();
        let d = range_decompose(p, ExtensionHeuristic::MinDegree);
        assert_eq!(d.mode(), Mode::Range);
        assert_eq!(d.cliques().len(), 2);
        assert_eq!(d.tree().separator(1), &[1]);
    }

    #[test]
    fn dense_cost_gives_single_clique() {
        let mut triples = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                triples.push((i, j, 1.0 + (i + j) as f64));
            }
        }
        let c = SparseSymMatrix::from_triples(3, &triples).unwrap();
        let p = SdpProblem::new(c, vec![], vec![], None).unwrap();
        assert_eq!(aggregate_pattern(&p).edge_count(), 3);
        let d = domain_decompose(p, ExtensionHeuristic::McsFill);
        assert_eq!(d.cliques().len(), 1);
        assert_eq!(d.cliques().clique(0), &[0, 1, 2]);
    }

    #[test]
    fn explicit_zeros_do_not_couple() {
        // Pattern entries holding exact zeros stay out of the aggregate.
        let c = SparseSymMatrix::from_triples(3, &[(0, 2, 0.0), (0, 0, 1.0)]).unwrap();
        let p = SdpProblem::new(c, vec![], vec![], None).unwrap();
        assert_eq!(aggregate_pattern(&p).edge_count(), 0);
    }

    #[test]
    fn merged_single_clique() {
        let p = chain_lmi();
        let d = domain_decompose(p, ExtensionHeuristic::McsFill).merged(0.0);
        assert_eq!(d.cliques().len(), 1);
        assert_eq!(d.cliques().clique(0), &[0, 1, 2]);
    }
}
