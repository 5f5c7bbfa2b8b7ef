use crate::Error;
use chordal_graph::{CliqueSet, Graph};

/// Symmetric sparsity pattern on an `n x n` matrix: the set of
/// off-diagonal positions that may hold nonzeros, stored as sorted pairs
/// `(i, j)` with `i < j`. Diagonal entries are always part of the
/// pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SparsityPattern {
    /// Diagonal-only pattern.
    pub fn diagonal(n: usize) -> Self {
        SparsityPattern { n, edges: Vec::new() }
    }

    /// Fully dense pattern.
    pub fn dense(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        SparsityPattern { n, edges }
    }

    /// Builds a pattern from off-diagonal positions given in any order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i == j {
                return Err(Error::Graph(chordal_graph::Error::SelfLoop(i)));
            }
            if i >= n || j >= n {
                return Err(Error::Graph(chordal_graph::Error::VertexOutOfRange {
                    vertex: i.max(j),
                    n,
                }));
            }
            norm.push((i.min(j), i.max(j)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(SparsityPattern { n, edges: norm })
    }

    pub fn from_graph(g: &Graph) -> Self {
        SparsityPattern { n: g.n(), edges: g.edges() }
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges).expect("pattern edges are valid")
    }

    /// Pattern whose edges are all pairs inside some clique of `cs`.
    pub fn from_cliques(cs: &CliqueSet) -> Self {
        Self::cover(cs.n(), cs.iter()).expect("clique pairs are valid")
    }

    /// Pattern with every listed index set made mutually adjacent.
    pub fn cover<I, S>(n: usize, sets: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut edges = Vec::new();
        for s in sets {
            let s = s.as_ref();
            for (a, &i) in s.iter().enumerate() {
                for &j in &s[a + 1..] {
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of stored entries in the upper triangle (diagonal included).
    pub fn entry_count(&self) -> usize {
        self.n + self.edges.len()
    }

    /// True for diagonal positions and pattern edges.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        if i >= self.n || j >= self.n {
            return false;
        }
        i == j || self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    pub fn union(&self, other: &SparsityPattern) -> Result<SparsityPattern, Error> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut edges: Vec<(usize, usize)> =
            self.edges.iter().chain(other.edges.iter()).copied().collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(SparsityPattern { n: self.n, edges })
    }

    pub fn is_subset_of(&self, other: &SparsityPattern) -> bool {
        self.n == other.n && self.edges.iter().all(|e| other.edges.binary_search(e).is_ok())
    }

    /// Upper-triangular entries `(i, j)` with `i <= j` in lexicographic
    /// order: the canonical coordinate list for vectorized arithmetic.
    pub fn entry_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.entry_count());
        let mut e = 0;
        for i in 0..self.n {
            out.push((i, i));
            while e < self.edges.len() && self.edges[e].0 == i {
                out.push(self.edges[e]);
                e += 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_list_is_lexicographic() {
        let p = SparsityPattern::from_edges(3, &[(1, 0), (1, 2)]).unwrap();
        assert_eq!(p.entry_list(), vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]);
        assert!(p.contains(0, 1));
        assert!(p.contains(2, 1));
        assert!(!p.contains(0, 2));
        assert!(p.contains(2, 2));
    }

    #[test]
    fn union_and_subset() {
        let a = SparsityPattern::from_edges(3, &[(0, 1)]).unwrap();
        let b = SparsityPattern::from_edges(3, &[(1, 2)]).unwrap();
        let u = a.union(&b).unwrap();
        assert!(a.is_subset_of(&u));
        assert!(b.is_subset_of(&u));
        assert_eq!(u.edge_count(), 2);
    }

    #[test]
    fn clique_pattern_covers_pairs() {
        let cs = chordal_graph::CliqueSet::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let p = SparsityPattern::from_cliques(&cs);
        assert_eq!(p.edges(), &[(0, 1), (1, 2)]);
    }
}
