use crate::{peo_witness, Error, Graph, Ordering};

/// A collection of vertex sets on `0..n`, each sorted ascending, with no
/// set contained in another. For a chordal graph these are its maximal
/// cliques; merged or lifted sets reuse the same container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSet {
    n: usize,
    cliques: Vec<Vec<usize>>,
}

impl CliqueSet {
    /// Validates range, sortedness, distinct members and pairwise
    /// non-inclusion.
    pub fn new(n: usize, cliques: Vec<Vec<usize>>) -> Result<Self, Error> {
        for c in &cliques {
            if c.is_empty() {
                return Err(Error::InvalidCliqueSet("empty clique".into()));
            }
            if !c.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidCliqueSet(format!("clique {c:?} is not strictly sorted")));
            }
            if *c.last().unwrap() >= n {
                return Err(Error::InvalidCliqueSet(format!("clique {c:?} exceeds vertex range {n}")));
            }
        }
        for (a, ca) in cliques.iter().enumerate() {
            for (b, cb) in cliques.iter().enumerate() {
                if a != b && is_subset(ca, cb) {
                    return Err(Error::InvalidCliqueSet(format!(
                        "clique {ca:?} is contained in {cb:?}"
                    )));
                }
            }
        }
        Ok(CliqueSet { n, cliques })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn clique(&self, k: usize) -> &[usize] {
        &self.cliques[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.cliques.iter().map(Vec::as_slice)
    }

    /// Index of the first clique containing every vertex of `set`.
    pub fn first_containing(&self, set: &[usize]) -> Option<usize> {
        self.cliques.iter().position(|c| set.iter().all(|v| c.binary_search(v).is_ok()))
    }

    /// True when every edge of `g` lies inside some clique.
    pub fn covers_edges(&self, g: &Graph) -> bool {
        g.edges().iter().all(|&(i, j)| self.first_containing(&[i, j]).is_some())
    }

    /// Largest clique size.
    pub fn max_size(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sizes of all cliques, in storage order.
    pub fn sizes(&self) -> Vec<usize> {
        self.cliques.iter().map(Vec::len).collect()
    }
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

/// Enumerates the maximal cliques of a chordal graph from a perfect
/// elimination ordering.
///
/// Each eliminated vertex proposes its closed later neighborhood; a
/// proposal is kept unless it is contained in a previously kept clique.
/// Containment is tested against every kept clique so that any perfect
/// elimination ordering is acceptable, not only MCS output.
pub fn maximal_cliques(g: &Graph, ord: &Ordering) -> Result<CliqueSet, Error> {
    if let Some((vertex, missing)) = peo_witness(g, ord)? {
        return Err(Error::NotPerfectOrdering { vertex, missing });
    }
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for k in 0..g.n() {
        let v = ord.vertex_at(k);
        let mut cand: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| ord.position(u) > k)
            .collect();
        cand.push(v);
        cand.sort_unstable();
        if !kept.iter().any(|c| is_subset(&cand, c)) {
            kept.push(cand);
        }
    }
    CliqueSet::new(g.n(), kept)
}

/// Enumerates the maximal cliques of an arbitrary graph by Bron-Kerbosch
/// with pivoting. Exponential in the worst case; intended for the small
/// correlative sparsity graphs that need not be chordal.
pub fn all_maximal_cliques(g: &Graph) -> Result<CliqueSet, Error> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = (0..g.n()).collect();
    bron_kerbosch(g, &mut r, p, Vec::new(), &mut found);
    for c in &mut found {
        c.sort_unstable();
    }
    found.sort();
    CliqueSet::new(g.n(), found)
}

fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    // Pivot on the candidate or excluded vertex with most candidates as
    // neighbors; only non-neighbors of the pivot are branched on.
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.has_edge(u, v)).count())
        .unwrap();
    let branch: Vec<usize> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
    let mut p = p;
    for v in branch {
        r.push(v);
        let p_next = p.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
        let x_next = x.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
        bron_kerbosch(g, r, p_next, x_next, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}
