use crate::{Error, Graph};

/// A vertex elimination ordering: `order[k]` is the vertex eliminated at
/// position `k`, together with the inverse map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    order: Vec<usize>,
    pos: Vec<usize>,
}

impl Ordering {
    /// Validates that `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self, Error> {
        let n = order.len();
        let mut pos = vec![usize::MAX; n];
        for (k, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::NotPermutation(format!("vertex {v} out of range {n}")));
            }
            if pos[v] != usize::MAX {
                return Err(Error::NotPermutation(format!("vertex {v} appears twice")));
            }
            pos[v] = k;
        }
        Ok(Ordering { order, pos })
    }

    /// Identity ordering `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Self {
        Ordering { order: (0..n).collect(), pos: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Vertex eliminated at position `k`.
    pub fn vertex_at(&self, k: usize) -> usize {
        self.order[k]
    }

    /// Elimination position of vertex `v`.
    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }
}

/// Maximum cardinality search.
///
/// Repeatedly numbers (from position `n-1` down to `0`) an unnumbered vertex
/// with the largest count of already-numbered neighbors; ties pick the
/// smallest vertex index. On a chordal graph the result is a perfect
/// elimination ordering.
pub fn mcs(g: &Graph) -> Ordering {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut placed = vec![false; n];
    let mut order = vec![0usize; n];
    for k in (0..n).rev() {
        let mut best = usize::MAX;
        let mut best_w = 0;
        for v in 0..n {
            if !placed[v] && (best == usize::MAX || weight[v] > best_w) {
                best = v;
                best_w = weight[v];
            }
        }
        placed[best] = true;
        order[k] = best;
        for &u in g.neighbors(best) {
            if !placed[u] {
                weight[u] += 1;
            }
        }
    }
    Ordering::new(order).expect("mcs emits a permutation")
}

/// Checks whether `ord` is a perfect elimination ordering of `g`: for every
/// vertex, its neighbors later in the ordering must form a clique.
pub fn verify_peo(g: &Graph, ord: &Ordering) -> Result<bool, Error> {
    Ok(peo_witness(g, ord)?.is_none())
}

/// Like [`verify_peo`] but reports the first violation: the eliminated
/// vertex and the missing edge among its later neighbors.
pub fn peo_witness(g: &Graph, ord: &Ordering) -> Result<Option<(usize, (usize, usize))>, Error> {
    if ord.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: ord.len() });
    }
    let mut later = Vec::new();
    for k in 0..g.n() {
        let v = ord.vertex_at(k);
        later.clear();
        later.extend(g.neighbors(v).iter().copied().filter(|&u| ord.position(u) > k));
        for (a, &u) in later.iter().enumerate() {
            for &w in &later[a + 1..] {
                if !g.has_edge(u, w) {
                    return Ok(Some((v, (u, w))));
                }
            }
        }
    }
    Ok(None)
}

/// A graph is chordal exactly when the MCS ordering is a perfect
/// elimination ordering.
pub fn is_chordal(g: &Graph) -> bool {
    verify_peo(g, &mcs(g)).expect("mcs ordering has matching dimension")
}
