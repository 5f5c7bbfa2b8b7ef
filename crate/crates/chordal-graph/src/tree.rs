use crate::cliques::is_subset;
use crate::CliqueSet;

/// A maximum-weight spanning forest over the clique intersection graph,
/// rooted per component. For the maximal cliques of a chordal graph this
/// is a clique tree: every intersection `C_i ∩ C_j` is contained in each
/// clique on the tree path between `i` and `j`.
#[derive(Debug, Clone)]
pub struct CliqueTree {
    cliques: CliqueSet,
    parent: Vec<Option<usize>>,
    /// `separators[k]` = intersection of clique `k` with its parent;
    /// empty for roots.
    separators: Vec<Vec<usize>>,
    /// Topological order, parents before children, roots first per
    /// component.
    order: Vec<usize>,
}

impl CliqueTree {
    pub fn cliques(&self) -> &CliqueSet {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn parent(&self, k: usize) -> Option<usize> {
        self.parent[k]
    }

    pub fn separator(&self, k: usize) -> &[usize] {
        &self.separators[k]
    }

    /// Topological visit order (every parent precedes its children).
    pub fn topological(&self) -> &[usize] {
        &self.order
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.parent[k].is_none()).collect()
    }

    /// Tree edges as `(child, parent)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter_map(|k| self.parent[k].map(|p| (k, p))).collect()
    }

    /// Checks the clique intersection property by brute force; intended
    /// for small clique counts.
    pub fn satisfies_intersection_property(&self) -> bool {
        let t = self.len();
        for i in 0..t {
            for j in i + 1..t {
                let inter: Vec<usize> = self
                    .cliques
                    .clique(i)
                    .iter()
                    .copied()
                    .filter(|v| self.cliques.clique(j).binary_search(v).is_ok())
                    .collect();
                if inter.is_empty() {
                    continue;
                }
                let Some(path) = self.path(i, j) else { return false };
                for k in path {
                    if !is_subset(&inter, self.cliques.clique(k)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Vertices on the tree path between `i` and `j`, or `None` when they
    /// lie in different components.
    fn path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        let chain = |mut k: usize| {
            let mut up = vec![k];
            while let Some(p) = self.parent[k] {
                up.push(p);
                k = p;
            }
            up
        };
        let a = chain(i);
        let b = chain(j);
        if a.last() != b.last() {
            return None;
        }
        // Join the two root-directed chains at their lowest common vertex.
        let in_b: std::collections::HashSet<usize> = b.iter().copied().collect();
        let meet = *a.iter().find(|k| in_b.contains(k)).expect("shared root");
        let mut path: Vec<usize> = a.iter().copied().take_while(|&k| k != meet).collect();
        path.push(meet);
        let tail: Vec<usize> = b.iter().copied().take_while(|&k| k != meet).collect();
        path.extend(tail.into_iter().rev());
        Some(path)
    }
}

/// Builds a clique tree by Kruskal's algorithm on the clique intersection
/// graph with weights `|C_i ∩ C_j|`; ties resolve by smallest index pair.
/// Disconnected inputs yield a forest with one root per component.
pub fn clique_tree(cs: &CliqueSet) -> CliqueTree {
    let t = cs.len();
    let mut candidates = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            let w = cs
                .clique(i)
                .iter()
                .filter(|v| cs.clique(j).binary_search(v).is_ok())
                .count();
            if w > 0 {
                candidates.push((w, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut dsu: Vec<usize> = (0..t).collect();
    fn find(dsu: &mut Vec<usize>, mut x: usize) -> usize {
        while dsu[x] != x {
            dsu[x] = dsu[dsu[x]];
            x = dsu[x];
        }
        x
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); t];
    for (_, i, j) in candidates {
        let (ri, rj) = (find(&mut dsu, i), find(&mut dsu, j));
        if ri != rj {
            dsu[ri] = rj;
            adj[i].push(j);
            adj[j].push(i);
        }
    }

    // Root each component at its smallest clique index and orient edges.
    let mut parent = vec![None; t];
    let mut seen = vec![false; t];
    let mut order = Vec::with_capacity(t);
    for root in 0..t {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(k) = queue.pop_front() {
            order.push(k);
            let mut next: Vec<usize> = adj[k].iter().copied().filter(|&u| !seen[u]).collect();
            next.sort_unstable();
            for u in next {
                seen[u] = true;
                parent[u] = Some(k);
                queue.push_back(u);
            }
        }
    }

    let separators = (0..t)
        .map(|k| match parent[k] {
            Some(p) => cs
                .clique(k)
                .iter()
                .copied()
                .filter(|v| cs.clique(p).binary_search(v).is_ok())
                .collect(),
            None => Vec::new(),
        })
        .collect();

    CliqueTree { cliques: cs.clone(), parent, separators, order }
}

/// Greedily merges child cliques into their parents whenever
/// `|C_i ∪ C_j| <= |C_i| + |C_j| - threshold * |C_i ∩ C_j|`, then removes
/// sets swallowed by the merges. `threshold = +inf` keeps the input;
/// `threshold = 0` collapses each tree component into one set. Merged
/// sets are cliques of a further fill-in, not necessarily of the original
/// graph.
pub fn merge_cliques(ct: &CliqueTree, threshold: f64) -> CliqueSet {
    let t = ct.len();
    let mut sets: Vec<Vec<usize>> = (0..t).map(|k| ct.cliques().clique(k).to_vec()).collect();
    let mut parent: Vec<Option<usize>> = (0..t).map(|k| ct.parent(k)).collect();
    let mut alive = vec![true; t];

    // Visit children before parents so chains can collapse in one pass.
    for &k in ct.topological().iter().rev() {
        let Some(mut p) = parent[k] else { continue };
        while !alive[p] {
            p = parent[p].expect("merged cliques keep a live ancestor");
        }
        let inter = intersect_count(&sets[k], &sets[p]);
        let union = sets[k].len() + sets[p].len() - inter;
        let bound = sets[k].len() as f64 + sets[p].len() as f64 - threshold * inter as f64;
        // NaN (inf * 0) compares false, so disjoint pairs never merge at
        // infinite threshold.
        if (union as f64) <= bound {
            let merged = union_sorted(&sets[k], &sets[p]);
            sets[p] = merged;
            alive[k] = false;
            parent[k] = Some(p);
        }
    }

    let mut out: Vec<Vec<usize>> = Vec::new();
    for k in 0..t {
        if alive[k] {
            out.push(sets[k].clone());
        }
    }
    // Merging can swallow unrelated sets; drop any set contained in
    // another, keeping the first occurrence.
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in out {
        if kept.iter().any(|c| is_subset(&s, c)) {
            continue;
        }
        kept.retain(|c| !is_subset(c, &s));
        kept.push(s);
    }
    CliqueSet::new(ct.cliques().n(), kept).expect("merged sets are pairwise incomparable")
}

fn intersect_count(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|v| b.binary_search(v).is_ok()).count()
}

fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{maximal_cliques, mcs, Graph};

    fn tree_of(text: &str) -> CliqueTree {
        let g = Graph::parse(text).unwrap();
        clique_tree(&maximal_cliques(&g, &mcs(&g)).unwrap())
    }

    #[test]
    fn six_vertex_tree_is_a_star() {
        // Cliques {1,2,3}, {3,4,5}, {1,5,6} all intersect {1,3,5} in two
        // vertices, so the hub must be {1,3,5}.
        let ct = tree_of("6 9\n1 2\n1 3\n1 5\n1 6\n2 3\n3 4\n3 5\n4 5\n5 6\n");
        let hub = (0..ct.len())
            .find(|&k| ct.cliques().clique(k) == [0, 2, 4])
            .expect("clique {1,3,5} present");
        for k in 0..ct.len() {
            if k == hub {
                continue;
            }
            let attached = ct.parent(k) == Some(hub) || (ct.parent(k).is_none() && ct.parent(hub) == Some(k));
            assert!(attached, "clique {k} must touch the hub");
        }
        assert!(ct.satisfies_intersection_property());
    }

    #[test]
    fn chain_tree_is_a_path_with_singleton_separators() {
        let ct = tree_of("4 3\n1 2\n2 3\n3 4\n");
        assert_eq!(ct.len(), 3);
        assert_eq!(ct.edges().len(), 2);
        let mut seps: Vec<Vec<usize>> =
            (0..ct.len()).map(|k| ct.separator(k).to_vec()).filter(|s| !s.is_empty()).collect();
        seps.sort();
        assert_eq!(seps, vec![vec![1], vec![2]]);
        assert!(ct.satisfies_intersection_property());
    }

    #[test]
    fn disconnected_cliques_give_forest() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let ct = clique_tree(&maximal_cliques(&g, &mcs(&g)).unwrap());
        assert_eq!(ct.roots().len(), 2);
        assert!(ct.satisfies_intersection_property());
    }

    #[test]
    fn merge_threshold_zero_collapses_chain() {
        let ct = tree_of("3 2\n1 2\n2 3\n");
        let merged = merge_cliques(&ct, 0.0);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.clique(0), &[0, 1, 2]);
    }

    #[test]
    fn merge_threshold_infinite_keeps_input() {
        let ct = tree_of("6 9\n1 2\n1 3\n1 5\n1 6\n2 3\n3 4\n3 5\n4 5\n5 6\n");
        let merged = merge_cliques(&ct, f64::INFINITY);
        assert_eq!(merged.len(), ct.len());
    }
}
