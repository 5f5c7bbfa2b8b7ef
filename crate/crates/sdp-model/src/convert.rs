use crate::{aggregate_pattern, domain_decompose, Error, SdpProblem};
use chordal_graph::{CliqueSet, ExtensionHeuristic};
use nalgebra::DMatrix;
use sparse_matrix::SparseSymMatrix;
use std::collections::BTreeMap;

/// Standard-form SDP over a product of clique cones, equivalent to the
/// original sparse problem through overlap consistency rows.
#[derive(Debug, Clone)]
pub struct ConvertedSdp {
    variables: Vec<usize>,
    data: SdpProblem,
    consistency_rows: Vec<usize>,
    cliques: CliqueSet,
    offsets: Vec<usize>,
    owner: BTreeMap<(usize, usize), usize>,
}

impl ConvertedSdp {
    /// Cone sizes, one per clique.
    pub fn variables(&self) -> &[usize] {
        &self.variables
    }

    pub fn data(&self) -> &SdpProblem {
        &self.data
    }

    /// Row indices of the overlap equality constraints in `data`.
    pub fn consistency_rows(&self) -> &[usize] {
        &self.consistency_rows
    }

    pub fn cliques(&self) -> &CliqueSet {
        &self.cliques
    }

    /// Column where clique `k`'s block starts in the product cone.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// Maps a feasible point of the converted problem back to a sparse
    /// matrix on the original pattern, reading each entry off the clique
    /// that owns it.
    pub fn restore(&self, x: &DMatrix<f64>) -> SparseSymMatrix {
        let n = self.cliques.n();
        let pattern =
            sparse_matrix::SparsityPattern::from_edges(
                n,
                &self.owner.keys().copied().filter(|&(i, j)| i != j).collect::<Vec<_>>(),
            )
            .expect("owned entries are valid");
        let mut out = SparseSymMatrix::zeros(pattern);
        for (&(i, j), &k) in &self.owner {
            let c = self.cliques.clique(k);
            let a = self.offsets[k] + c.binary_search(&i).unwrap();
            let b = self.offsets[k] + c.binary_search(&j).unwrap();
            out.set(i, j, x[(a, b)]).expect("entry on pattern");
        }
        out
    }
}

/// Rewrites a sparse SDP as a standard-form SDP over one cone per clique
/// of a chordal extension of its aggregate pattern.
///
/// Each aggregate entry is owned by the first clique containing it; the
/// cost and constraint data are split accordingly. Equality of overlapping
/// entries across cliques is enforced by appended consistency rows, scaled
/// so every row has unit Frobenius norm per clique block. With
/// `drop_redundant`, rows are generated only for clique-tree edges, which
/// the clique intersection property makes sufficient.
pub fn clique_tree_convert(
    p: &SdpProblem,
    ext: ExtensionHeuristic,
    drop_redundant: bool,
) -> Result<ConvertedSdp, Error> {
    let agg = aggregate_pattern(p);
    let d = domain_decompose(p.clone(), ext);
    let cliques = d.cliques().clone();
    let t = cliques.len();

    let variables: Vec<usize> = cliques.iter().map(|c| c.len()).collect();
    let mut offsets = Vec::with_capacity(t);
    let mut acc = 0;
    for &s in &variables {
        offsets.push(acc);
        acc += s;
    }
    let big_n = acc;

    // Entry ownership: first clique containing both endpoints.
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, j) in agg.entry_list() {
        let k = (0..t)
            .find(|&k| {
                let c = cliques.clique(k);
                c.binary_search(&i).is_ok() && c.binary_search(&j).is_ok()
            })
            .expect("cliques cover the aggregate pattern");
        owner.insert((i, j), k);
    }
    let locate = |k: usize, i: usize, j: usize| {
        let c = cliques.clique(k);
        let a = offsets[k] + c.binary_search(&i).unwrap();
        let b = offsets[k] + c.binary_search(&j).unwrap();
        (a.min(b), a.max(b))
    };
    let split = |m: &SparseSymMatrix| -> Result<SparseSymMatrix, Error> {
        let mut triples = Vec::new();
        for (i, j, v) in m.entries() {
            if v == 0.0 {
                continue;
            }
            let k = owner[&(i, j)];
            let (a, b) = locate(k, i, j);
            triples.push((a, b, v));
        }
        Ok(SparseSymMatrix::from_triples(big_n, &triples)?)
    };

    let c_conv = split(p.c())?;
    let mut a_conv = Vec::with_capacity(p.m());
    for ai in p.a() {
        a_conv.push(split(ai)?);
    }
    let mut b_conv = p.b().to_vec();

    // Overlapping clique pairs, ordered by (min index, max index).
    let mut pairs: Vec<(usize, usize)> = if drop_redundant {
        d.tree().edges().iter().map(|&(c, par)| (c.min(par), c.max(par))).collect()
    } else {
        let mut v = Vec::new();
        for k in 0..t {
            for l in k + 1..t {
                let ck = cliques.clique(k);
                if cliques.clique(l).iter().any(|x| ck.binary_search(x).is_ok()) {
                    v.push((k, l));
                }
            }
        }
        v
    };
    pairs.sort_unstable();

    let first_row = b_conv.len();
    let inv_sqrt2 = 0.5_f64.sqrt();
    for (k, l) in pairs {
        let ck = cliques.clique(k);
        let shared: Vec<usize> =
            cliques.clique(l).iter().copied().filter(|x| ck.binary_search(x).is_ok()).collect();
        for (s, &u) in shared.iter().enumerate() {
            for &v in &shared[s..] {
                let w = if u == v { 1.0 } else { inv_sqrt2 };
                let (ka, kb) = locate(k, u, v);
                let (la, lb) = locate(l, u, v);
                let row =
                    SparseSymMatrix::from_triples(big_n, &[(ka, kb, w), (la, lb, -w)])?;
                a_conv.push(row);
                b_conv.push(0.0);
            }
        }
    }
    let consistency_rows: Vec<usize> = (first_row..b_conv.len()).collect();

    let blocks: Vec<i64> = variables.iter().map(|&s| s as i64).collect();
    let data = SdpProblem::new(c_conv, a_conv, b_conv, Some(blocks))?;
    Ok(ConvertedSdp { variables, data, consistency_rows, cliques, offsets, owner })
}
