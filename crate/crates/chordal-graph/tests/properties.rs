//! Randomized invariants for the combinatorial layer. Interval graphs
//! serve as an independent source of chordal graphs: they are chordal by
//! construction without involving the code under test.

use chordal_graph::{
    chordal_extension, clique_tree, is_chordal, lift_partition_graph, maximal_cliques, mcs,
    merge_cliques, verify_peo, ExtensionHeuristic, Graph, Partition,
};
use proptest::prelude::*;

fn interval_graph(intervals: &[(u8, u8)]) -> Graph {
    let n = intervals.len();
    let mut g = Graph::new(n);
    let norm: Vec<(u8, u8)> = intervals
        .iter()
        .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            let (a1, b1) = norm[i];
            let (a2, b2) = norm[j];
            if a1 <= b2 && a2 <= b1 {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

fn random_graph(n: usize, edge_mask: &[bool]) -> Graph {
    let mut g = Graph::new(n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if edge_mask.get(k).copied().unwrap_or(false) {
                g.add_edge(i, j).unwrap();
            }
            k += 1;
        }
    }
    g
}

proptest! {
    #[test]
    fn mcs_finds_peo_on_interval_graphs(intervals in prop::collection::vec((0u8..40, 0u8..40), 1..25)) {
        let g = interval_graph(&intervals);
        let ord = mcs(&g);
        prop_assert!(verify_peo(&g, &ord).unwrap());
        prop_assert!(is_chordal(&g));
    }

    #[test]
    fn extensions_are_chordal_supersets(
        n in 1usize..12,
        mask in prop::collection::vec(any::<bool>(), 66),
    ) {
        let g = random_graph(n, &mask);
        for h in [
            ExtensionHeuristic::McsFill,
            ExtensionHeuristic::MinDegree,
            ExtensionHeuristic::CompleteComponents,
        ] {
            let ext = chordal_extension(&g, h);
            prop_assert!(is_chordal(&ext));
            for (i, j) in g.edges() {
                prop_assert!(ext.has_edge(i, j));
            }
        }
    }

    #[test]
    fn maximal_cliques_cover_and_are_maximal(intervals in prop::collection::vec((0u8..30, 0u8..30), 1..20)) {
        let g = interval_graph(&intervals);
        let cs = maximal_cliques(&g, &mcs(&g)).unwrap();
        prop_assert!(cs.covers_edges(&g));
        for c in cs.iter() {
            prop_assert!(g.is_clique(c));
            // Maximality: no vertex extends the clique.
            for v in 0..g.n() {
                if c.binary_search(&v).is_err() {
                    prop_assert!(!c.iter().all(|&u| g.has_edge(u, v)));
                }
            }
        }
        // Every vertex appears somewhere.
        for v in 0..g.n() {
            prop_assert!(cs.first_containing(&[v]).is_some());
        }
    }

    #[test]
    fn clique_tree_has_intersection_property(intervals in prop::collection::vec((0u8..25, 0u8..25), 1..14)) {
        let g = interval_graph(&intervals);
        let cs = maximal_cliques(&g, &mcs(&g)).unwrap();
        if cs.len() <= 12 {
            let ct = clique_tree(&cs);
            prop_assert!(ct.satisfies_intersection_property());
            // Edge count matches component count of the intersection graph.
            let comps = ct.roots().len();
            prop_assert_eq!(ct.edges().len() + comps, cs.len());
        }
    }

    #[test]
    fn merged_cliques_still_cover(
        intervals in prop::collection::vec((0u8..25, 0u8..25), 1..14),
        threshold in 0.0f64..3.0,
    ) {
        let g = interval_graph(&intervals);
        let cs = maximal_cliques(&g, &mcs(&g)).unwrap();
        let ct = clique_tree(&cs);
        let merged = merge_cliques(&ct, threshold);
        prop_assert!(merged.covers_edges(&g));
        let untouched = merge_cliques(&ct, f64::INFINITY);
        prop_assert_eq!(untouched.len(), cs.len());
    }

    #[test]
    fn refinement_is_reflexive_and_transitive(splits in prop::collection::vec(1usize..5, 1..6), subsplit in any::<u64>()) {
        // Build alpha, then beta by splitting alpha's blocks, then gamma by
        // splitting beta's: gamma refines beta refines alpha by construction.
        let alpha = Partition::new(splits.clone()).unwrap();
        let split_blocks = |p: &Partition, mut bits: u64| {
            let mut sizes = Vec::new();
            for &s in p.sizes() {
                if s > 1 && bits & 1 == 1 {
                    sizes.push(1);
                    sizes.push(s - 1);
                } else {
                    sizes.push(s);
                }
                bits >>= 1;
            }
            Partition::new(sizes).unwrap()
        };
        let beta = split_blocks(&alpha, subsplit);
        let gamma = split_blocks(&beta, subsplit >> 16);
        prop_assert!(alpha.refines(&alpha));
        prop_assert!(beta.refines(&alpha));
        prop_assert!(gamma.refines(&beta));
        prop_assert!(gamma.refines(&alpha));
        prop_assert!(Partition::unit(alpha.total()).refines(&alpha));
    }

    #[test]
    fn lifting_preserves_chordality(
        intervals in prop::collection::vec((0u8..20, 0u8..20), 1..8),
        sizes in prop::collection::vec(1usize..4, 8),
    ) {
        let g = interval_graph(&intervals);
        let part = Partition::new(sizes[..g.n()].to_vec()).unwrap();
        let (lifted, ranges) = lift_partition_graph(&g, &part).unwrap();
        prop_assert!(is_chordal(&lifted));
        prop_assert_eq!(ranges.len(), g.n());
        // Lifted maximal cliques are the lifts of block maximal cliques.
        let block_cliques = maximal_cliques(&g, &mcs(&g)).unwrap();
        let scal_cliques = maximal_cliques(&lifted, &mcs(&lifted)).unwrap();
        let mut lifted_sets: Vec<Vec<usize>> =
            block_cliques.iter().map(|c| part.lift_set(c)).collect();
        let mut scal_sets: Vec<Vec<usize>> = scal_cliques.iter().map(<[usize]>::to_vec).collect();
        lifted_sets.sort();
        scal_sets.sort();
        prop_assert_eq!(lifted_sets, scal_sets);
    }
}
