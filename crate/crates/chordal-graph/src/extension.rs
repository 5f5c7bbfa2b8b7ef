use crate::{mcs, Graph};

/// Fill-in heuristic used by [`chordal_extension`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionHeuristic {
    /// Symbolic elimination along the reversed maximum-cardinality-search
    /// order. Leaves an already-chordal graph unchanged.
    McsFill,
    /// Greedy minimum-degree symbolic elimination, recomputing degrees
    /// after each step; ties pick the smallest vertex index.
    MinDegree,
    /// Completes every connected component into a clique.
    CompleteComponents,
}

impl std::str::FromStr for ExtensionHeuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mcs-fill" => Ok(ExtensionHeuristic::McsFill),
            "min-degree" => Ok(ExtensionHeuristic::MinDegree),
            "complete-components" => Ok(ExtensionHeuristic::CompleteComponents),
            other => Err(format!(
                "unknown extension heuristic {other:?} (expected mcs-fill, min-degree or complete-components)"
            )),
        }
    }
}

impl std::fmt::Display for ExtensionHeuristic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExtensionHeuristic::McsFill => "mcs-fill",
            ExtensionHeuristic::MinDegree => "min-degree",
            ExtensionHeuristic::CompleteComponents => "complete-components",
        })
    }
}

/// Adds fill edges so that the result is chordal. The output always
/// contains every edge of `g`.
pub fn chordal_extension(g: &Graph, heuristic: ExtensionHeuristic) -> Graph {
    match heuristic {
        ExtensionHeuristic::McsFill => mcs_fill(g),
        ExtensionHeuristic::MinDegree => min_degree_fill(g),
        ExtensionHeuristic::CompleteComponents => complete_components(g),
    }
}

fn mcs_fill(g: &Graph) -> Graph {
    let ord = mcs(g);
    let mut out = g.clone();
    // Eliminate in MCS position order; each step completes the
    // still-uneliminated neighborhood. Zero fill when `ord` is already a
    // perfect elimination ordering.
    let mut nbrs = Vec::new();
    for k in 0..ord.len() {
        let v = ord.vertex_at(k);
        nbrs.clear();
        nbrs.extend(out.neighbors(v).iter().copied().filter(|&u| ord.position(u) > k));
        for (a, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[a + 1..] {
                out.add_edge(u, w).expect("fill edge endpoints are valid");
            }
        }
    }
    out
}

fn min_degree_fill(g: &Graph) -> Graph {
    let n = g.n();
    let mut out = g.clone();
    // Working adjacency as bit-free sets; degrees recomputed as the
    // elimination proceeds.
    let mut adj: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (adj[v].len(), v))
            .expect("one vertex per round");
        alive[v] = false;
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &nbrs {
            adj[u].remove(&v);
        }
        for (a, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[a + 1..] {
                if adj[u].insert(w) {
                    adj[w].insert(u);
                    out.add_edge(u, w).expect("fill edge endpoints are valid");
                }
            }
        }
    }
    out
}

fn complete_components(g: &Graph) -> Graph {
    let mut out = g.clone();
    for comp in g.connected_components() {
        for (a, &u) in comp.iter().enumerate() {
            for &w in &comp[a + 1..] {
                out.add_edge(u, w).expect("component vertices are valid");
            }
        }
    }
    out
}
