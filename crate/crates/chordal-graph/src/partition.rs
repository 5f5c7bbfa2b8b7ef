use crate::{Error, Graph};

/// An ordered partition of `0..total()` into contiguous blocks, recorded
/// by block sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl Partition {
    /// Builds a partition from block sizes; zero-sized blocks are
    /// rejected.
    pub fn new(sizes: Vec<usize>) -> Result<Self, Error> {
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidCliqueSet("partition blocks must be nonempty".into()));
        }
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        offsets.push(acc);
        Ok(Partition { sizes, offsets })
    }

    /// The all-ones partition of `n` scalars.
    pub fn unit(n: usize) -> Self {
        Partition::new(vec![1; n]).expect("unit blocks are nonempty")
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, block: usize) -> usize {
        self.sizes[block]
    }

    /// Total number of scalar indices.
    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Scalar index range of `block`.
    pub fn range(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }

    /// Block containing scalar index `i`.
    pub fn block_of(&self, i: usize) -> usize {
        debug_assert!(i < self.total());
        self.offsets.partition_point(|&o| o <= i) - 1
    }

    /// Maps a set of block indices to the sorted set of scalar indices it
    /// covers.
    pub fn lift_set(&self, blocks: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        let mut sorted = blocks.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for b in sorted {
            out.extend(self.range(b));
        }
        out
    }

    /// Partition refinement: `self` refines `coarse` when every coarse
    /// block is a contiguous run of `self`'s blocks. Reflexive.
    pub fn refines(&self, coarse: &Partition) -> bool {
        if self.total() != coarse.total() {
            return false;
        }
        let mut k = 0;
        for &target in &coarse.sizes {
            let mut acc = 0;
            while acc < target {
                if k >= self.sizes.len() {
                    return false;
                }
                acc += self.sizes[k];
                k += 1;
            }
            if acc != target {
                return false;
            }
        }
        k == self.sizes.len()
    }
}

/// Expands a block sparsity graph on `part.len()` blocks to the scalar
/// graph on `part.total()` vertices: each block becomes a complete
/// subgraph and each block edge a complete bipartite one. Also returns
/// the scalar index range of every block, which lifts block cliques to
/// scalar cliques.
pub fn lift_partition_graph(
    g: &Graph,
    part: &Partition,
) -> Result<(Graph, Vec<std::ops::Range<usize>>), Error> {
    if g.n() != part.len() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: part.len() });
    }
    let mut out = Graph::new(part.total());
    for b in 0..part.len() {
        let r = part.range(b);
        for i in r.clone() {
            for j in i + 1..r.end {
                out.add_edge(i, j).expect("lifted indices are in range");
            }
        }
    }
    for (a, b) in g.edges() {
        for i in part.range(a) {
            for j in part.range(b) {
                out.add_edge(i, j).expect("lifted indices are in range");
            }
        }
    }
    let ranges = (0..part.len()).map(|b| part.range(b)).collect();
    Ok((out, ranges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::is_chordal;

    #[test]
    fn refinement_chain() {
        let gamma = Partition::unit(6);
        let beta = Partition::new(vec![2, 2, 2]).unwrap();
        let alpha = Partition::new(vec![4, 2]).unwrap();
        assert!(gamma.refines(&beta));
        assert!(beta.refines(&alpha));
        assert!(gamma.refines(&alpha));
        assert!(!alpha.refines(&beta));
        assert!(alpha.refines(&alpha));
    }

    #[test]
    fn misaligned_blocks_do_not_refine() {
        let a = Partition::new(vec![3, 3]).unwrap();
        let b = Partition::new(vec![2, 4]).unwrap();
        assert!(!a.refines(&b));
        assert!(!b.refines(&a));
    }

    #[test]
    fn block_of_inverts_ranges() {
        let p = Partition::new(vec![2, 1, 3]).unwrap();
        let blocks: Vec<usize> = (0..p.total()).map(|i| p.block_of(i)).collect();
        assert_eq!(blocks, vec![0, 0, 1, 2, 2, 2]);
    }

    #[test]
    fn lift_two_blocks_into_triangle() {
        // Complete graph on blocks {2,1} lifts to a triangle.
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let p = Partition::new(vec![2, 1]).unwrap();
        let (lifted, ranges) = lift_partition_graph(&g, &p).unwrap();
        assert_eq!(lifted.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(ranges, vec![0..2, 2..3]);
    }

    #[test]
    fn lifted_block_chain_stays_chordal() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p = Partition::new(vec![2, 3, 2]).unwrap();
        let (lifted, _) = lift_partition_graph(&g, &p).unwrap();
        assert!(is_chordal(&lifted));
        assert_eq!(p.lift_set(&[0, 2]), vec![0, 1, 5, 6]);
    }
}
