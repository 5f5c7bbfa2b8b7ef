//! Term sparsity: iterated completion of the support graph on a fixed
//! monomial basis. Vertices are basis monomials; an edge means the two
//! monomials may share a nonzero Gram entry. Each round admits the pairs
//! whose product lies in the previous round's reachable support, closes
//! the graph under the chosen extension, and feeds the enlarged support
//! back in. The edge sets grow monotonically and must stabilize.

use std::collections::BTreeSet;

use chordal_graph::{chordal_extension, CliqueSet, ExtensionHeuristic, Graph};
use sparse_matrix::SparsityPattern;

use crate::error::Error;
use crate::poly::{Exponent, ExponentSet};

/// How each round's candidate graph is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportExtension {
    /// Complete every connected component.
    Block,
    /// Minimum-degree chordal extension; keeps blocks smaller at the
    /// price of more of them.
    Chordal,
}

/// Support-extension iteration on `basis` seeded by the support `supp`
/// (and by all squares, which are always admissible). Returns the strictly
/// increasing chain of patterns, ending at the stabilized one, or after
/// `max_iter` rounds if stabilization comes later.
///
/// Every element of `supp` must be a sum of two basis elements.
pub fn tssos_edges(
    supp: &[Exponent],
    basis: &ExponentSet,
    ext: SupportExtension,
    max_iter: usize,
) -> Result<Vec<SparsityPattern>, Error> {
    check_coverage(supp, basis, None)?;
    Ok(iterate(supp, basis, ext, max_iter))
}

/// Correlatively pruned variant: the basis first drops monomials whose
/// variables fit in no clique, then the plain iteration runs and every
/// round is intersected with the correlative pattern (pairs whose product
/// stays inside one variable clique). Consecutive duplicate rounds are
/// collapsed. Returns the pruned basis along with the patterns over it.
pub fn cs_tssos_edges(
    supp: &[Exponent],
    basis: &ExponentSet,
    ext: SupportExtension,
    var_cliques: &CliqueSet,
    max_iter: usize,
) -> Result<(ExponentSet, Vec<SparsityPattern>), Error> {
    let kept: Vec<Exponent> = basis
        .iter()
        .filter(|b| var_cliques.iter().any(|j| b.supported_on(j)))
        .cloned()
        .collect();
    let pruned = ExponentSet::new(basis.n(), kept)?;
    check_coverage(supp, &pruned, Some(var_cliques))?;

    let raw = iterate(supp, &pruned, ext, max_iter);
    let mut out: Vec<SparsityPattern> = Vec::new();
    for pat in raw {
        let edges: Vec<(usize, usize)> = pat
            .edges()
            .iter()
            .copied()
            .filter(|&(i, j)| {
                let sum = pruned.get(i).add(pruned.get(j));
                var_cliques.iter().any(|c| sum.supported_on(c))
            })
            .collect();
        let cut = SparsityPattern::from_edges(pruned.len(), &edges)
            .expect("filtered edges remain valid");
        if out.last() != Some(&cut) {
            out.push(cut);
        }
    }
    Ok((pruned, out))
}

/// Blocks of the first-round candidate graph in the two-connected sense:
/// biconnected components plus bridges, with cut monomials reported in
/// every block they join. This is the finest block structure visible
/// before any completion is applied.
pub fn term_sparsity_blocks(
    supp: &[Exponent],
    basis: &ExponentSet,
) -> Result<Vec<Vec<usize>>, Error> {
    check_coverage(supp, basis, None)?;
    let seed = seed_support(supp, basis);
    let mut g = Graph::new(basis.len());
    for (i, j) in candidate_edges(basis, &seed) {
        g.add_edge(i, j).expect("candidate indices are in range");
    }
    Ok(g.biconnected_components())
}

/// GF(2) basis of the sign symmetries of a support set: each returned
/// index set `s` describes the sign flip `x_i → −x_i` for `i ∈ s`, and
/// these generate all flips fixing every support monomial.
pub fn sign_symmetries(supp: &[Exponent], n: usize) -> Vec<Vec<usize>> {
    let words = n.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for e in supp {
        let mut row = vec![0u64; words];
        for i in 0..n {
            if e.get(i) % 2 == 1 {
                row[i / 64] |= 1 << (i % 64);
            }
        }
        rows.push(row);
    }
    // Row-reduce to RREF over GF(2).
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let word = col / 64;
        let bit = 1u64 << (col % 64);
        let Some(src) = (rank..rows.len()).find(|&r| rows[r][word] & bit != 0) else {
            continue;
        };
        rows.swap(rank, src);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[word] & bit != 0 {
                for (w, p) in row.iter_mut().zip(&pivot_row) {
                    *w ^= p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    // Free columns parameterize the null space.
    let mut basis_vecs = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut s = vec![free];
        for (r, &pc) in pivots.iter().enumerate() {
            if rows[r][free / 64] & (1 << (free % 64)) != 0 {
                s.push(pc);
            }
        }
        s.sort_unstable();
        basis_vecs.push(s);
    }
    basis_vecs
}

/// Partition of the basis by parity against every sign symmetry of the
/// support. Two monomials share an orbit exactly when every admissible
/// sign flip treats them the same way.
pub fn sign_symmetry_orbits(supp: &[Exponent], basis: &ExponentSet) -> Vec<Vec<usize>> {
    let gens = sign_symmetries(supp, basis.n());
    let mut groups: std::collections::BTreeMap<Vec<bool>, Vec<usize>> = Default::default();
    for i in 0..basis.len() {
        let key: Vec<bool> = gens.iter().map(|s| basis.get(i).parity_against(s)).collect();
        groups.entry(key).or_default().push(i);
    }
    let mut orbits: Vec<Vec<usize>> = groups.into_values().collect();
    orbits.sort();
    orbits
}

fn seed_support(supp: &[Exponent], basis: &ExponentSet) -> BTreeSet<Exponent> {
    let mut seed: BTreeSet<Exponent> = supp.iter().cloned().collect();
    for b in basis.iter() {
        seed.insert(b.double());
    }
    seed
}

fn candidate_edges(basis: &ExponentSet, support: &BTreeSet<Exponent>) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if support.contains(&basis.get(i).add(basis.get(j))) {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn iterate(
    supp: &[Exponent],
    basis: &ExponentSet,
    ext: SupportExtension,
    max_iter: usize,
) -> Vec<SparsityPattern> {
    let nb = basis.len();
    let mut support = seed_support(supp, basis);
    let mut chain: Vec<SparsityPattern> = Vec::new();
    for _ in 0..max_iter {
        let cand = candidate_edges(basis, &support);
        let pattern = match ext {
            SupportExtension::Block => {
                let g = Graph::from_edges(nb, &cand).expect("candidate indices are in range");
                SparsityPattern::cover(nb, g.connected_components())
                    .expect("component sets are valid")
            }
            SupportExtension::Chordal => {
                let g = Graph::from_edges(nb, &cand).expect("candidate indices are in range");
                SparsityPattern::from_graph(&chordal_extension(&g, ExtensionHeuristic::MinDegree))
            }
        };
        if chain.last() == Some(&pattern) {
            break;
        }
        for &(i, j) in pattern.edges() {
            support.insert(basis.get(i).add(basis.get(j)));
        }
        chain.push(pattern);
    }
    chain
}

fn check_coverage(
    supp: &[Exponent],
    basis: &ExponentSet,
    var_cliques: Option<&CliqueSet>,
) -> Result<(), Error> {
    let mut uncovered = Vec::new();
    'terms: for alpha in supp {
        if let Some(cs) = var_cliques {
            if !cs.iter().any(|c| alpha.supported_on(c)) {
                uncovered.push(alpha.clone());
                continue;
            }
        }
        for i in 0..basis.len() {
            if let Some(rest) = alpha.checked_sub(basis.get(i)) {
                if basis.contains(&rest) {
                    continue 'terms;
                }
            }
        }
        uncovered.push(alpha.clone());
    }
    if uncovered.is_empty() {
        Ok(())
    } else {
        uncovered.sort();
        uncovered.dedup();
        Err(Error::SupportNotCovered { uncovered })
    }
}

/// Maximal cliques of a term-sparsity pattern. Block patterns are unions
/// of completes and chordal patterns are chordal, but correlative
/// intersection can break chordality, so the general enumeration is used.
pub fn pattern_cliques(pattern: &SparsityPattern) -> Result<CliqueSet, Error> {
    Ok(chordal_graph::all_maximal_cliques(&pattern.to_graph())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn sizes_of_components(p: &SparsityPattern) -> Vec<usize> {
        let mut s: Vec<usize> =
            p.to_graph().connected_components().iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn diagonal_support_stabilizes_immediately() {
        // Sums of distinct basis elements all leave the seed support, so
        // the first round has no edges and nothing changes afterwards.
        let basis = ExponentSet::new(
            2,
            vec![Exponent::zero(2), Exponent::unit(2, 0), Exponent::unit(2, 1)],
        )
        .unwrap();
        let supp: Vec<Exponent> = basis.iter().map(Exponent::double).collect();
        let chain = tssos_edges(&supp, &basis, SupportExtension::Block, 20).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain[0].edge_count(), 0);
    }

    #[test]
    fn coverage_failure_lists_terms() {
        let basis = ExponentSet::new(1, vec![Exponent::new(vec![1])]).unwrap();
        let supp = vec![Exponent::new(vec![3])];
        match tssos_edges(&supp, &basis, SupportExtension::Block, 5) {
            Err(Error::SupportNotCovered { uncovered }) => {
                assert_eq!(uncovered, vec![Exponent::new(vec![3])]);
            }
            other => panic!("expected SupportNotCovered, got {other:?}"),
        }
    }

    #[test]
    fn chain_is_monotone_and_short() {
        // x⁴ − x²y² + y⁴ on the basis {x², xy, y²}.
        let f = Polynomial::from_int_terms(
            2,
            &[(1, &[4, 0]), (-1, &[2, 2]), (1, &[0, 4])],
        )
        .unwrap();
        let basis = ExponentSet::new(
            2,
            vec![Exponent::new(vec![2, 0]), Exponent::new(vec![1, 1]), Exponent::new(vec![0, 2])],
        )
        .unwrap();
        let chain =
            tssos_edges(&f.support(), &basis, SupportExtension::Block, 20).unwrap();
        for w in chain.windows(2) {
            assert!(w[0].is_subset_of(&w[1]));
        }
        // x²·y² lies in the support, so those two monomials pair up, but
        // both products involving xy (x³y and xy³) stay unreachable.
        assert_eq!(chain.len(), 1);
        assert_eq!(sizes_of_components(&chain[0]), vec![1, 2]);
    }

    #[test]
    fn sign_symmetries_of_even_support() {
        // All exponents even: every single flip is a symmetry.
        let supp = vec![Exponent::new(vec![2, 0]), Exponent::new(vec![0, 2])];
        let gens = sign_symmetries(&supp, 2);
        assert_eq!(gens, vec![vec![0], vec![1]]);
    }

    #[test]
    fn sign_symmetries_with_odd_coupling() {
        // Support {x₂x₃ and evens} on three variables: flips fixing it
        // are generated by x₁ alone and by the joint x₂x₃ flip.
        let supp = vec![
            Exponent::new(vec![0, 1, 1]),
            Exponent::new(vec![4, 0, 0]),
            Exponent::new(vec![0, 0, 0]),
        ];
        let gens = sign_symmetries(&supp, 3);
        assert_eq!(gens, vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn orbits_group_by_parity() {
        let supp = vec![Exponent::new(vec![0, 1, 1]), Exponent::new(vec![4, 0, 0])];
        let basis = ExponentSet::monomials(3, 1);
        // Monomials 1, x₁ are fixed by both generators; x₂ and x₃ flip
        // together under the joint generator.
        let orbits = sign_symmetry_orbits(&supp, &basis);
        let named: Vec<Vec<String>> = orbits
            .iter()
            .map(|o| {
                let mut names: Vec<String> =
                    o.iter().map(|&i| basis.get(i).to_string()).collect();
                names.sort();
                names
            })
            .collect();
        assert!(named.contains(&vec!["1".to_string()]));
        assert!(named.contains(&vec!["x1".to_string()]));
        assert!(named.contains(&vec!["x2".to_string(), "x3".to_string()]));
    }
}
