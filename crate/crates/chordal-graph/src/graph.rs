use crate::Error;

/// Undirected graph on vertices `0..n` with sorted adjacency lists.
///
/// Self-loops are rejected and the adjacency relation is kept symmetric,
/// so the structure always describes the off-diagonal part of a symmetric
/// sparsity pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Empty graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list (0-based endpoints, any order).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = Graph::new(n);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Inserts edge `{i, j}`. Adding an existing edge is a no-op.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<(), Error> {
        if i >= self.n {
            return Err(Error::VertexOutOfRange { vertex: i, n: self.n });
        }
        if j >= self.n {
            return Err(Error::VertexOutOfRange { vertex: j, n: self.n });
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if let Err(pos) = self.adj[i].binary_search(&j) {
            self.adj[i].insert(pos, j);
            let pos = self.adj[j].binary_search(&i).unwrap_err();
            self.adj[j].insert(pos, i);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i].binary_search(&j).is_ok()
    }

    /// Edges as sorted pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for &j in &self.adj[i] {
                if j > i {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Checks that every pair of distinct vertices in `set` is adjacent.
    pub fn is_clique(&self, set: &[usize]) -> bool {
        for (a, &u) in set.iter().enumerate() {
            for &v in &set[a + 1..] {
                if u == v || !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Biconnected components ("blocks"): maximal edge sets in which every
    /// two edges lie on a common simple cycle, returned as their vertex
    /// sets. Cut vertices belong to every block they join, so the sets may
    /// overlap. Isolated vertices are reported as singleton blocks so the
    /// output covers all vertices. Blocks are sorted lexicographically.
    pub fn biconnected_components(&self) -> Vec<Vec<usize>> {
        let mut dfs = BlockDfs {
            g: self,
            disc: vec![usize::MAX; self.n],
            low: vec![0; self.n],
            timer: 0,
            edge_stack: Vec::new(),
            blocks: Vec::new(),
        };
        for s in 0..self.n {
            if dfs.disc[s] != usize::MAX {
                continue;
            }
            if self.adj[s].is_empty() {
                dfs.disc[s] = dfs.timer;
                dfs.timer += 1;
                dfs.blocks.push(vec![s]);
                continue;
            }
            dfs.visit(s, usize::MAX);
        }
        dfs.blocks.sort();
        dfs.blocks
    }

    /// Parses the text form: a `"n m"` header followed by `m` lines `"i j"`
    /// with 1-based endpoints and `i < j`. Blank lines and lines starting
    /// with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line_no, header) = lines
            .next()
            .ok_or(Error::Parse { line: 1, msg: "missing \"n m\" header".into() })?;
        let mut it = header.split_whitespace();
        let n: usize = parse_field(it.next(), line_no, "vertex count")?;
        let m: usize = parse_field(it.next(), line_no, "edge count")?;
        if it.next().is_some() {
            return Err(Error::Parse { line: line_no, msg: "trailing tokens after \"n m\" header".into() });
        }

        let mut g = Graph::new(n);
        let mut read = 0usize;
        for (line_no, line) in lines {
            let mut it = line.split_whitespace();
            let i: usize = parse_field(it.next(), line_no, "edge endpoint")?;
            let j: usize = parse_field(it.next(), line_no, "edge endpoint")?;
            if it.next().is_some() {
                return Err(Error::Parse { line: line_no, msg: "trailing tokens after edge".into() });
            }
            if i == 0 || j == 0 {
                return Err(Error::Parse { line: line_no, msg: "vertices are 1-based".into() });
            }
            if i >= j {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("edge must satisfy i < j, got {i} {j}"),
                });
            }
            if j > n {
                return Err(Error::Parse { line: line_no, msg: format!("vertex {j} exceeds n = {n}") });
            }
            if g.has_edge(i - 1, j - 1) {
                return Err(Error::Parse { line: line_no, msg: format!("duplicate edge {i} {j}") });
            }
            g.add_edge(i - 1, j - 1).expect("validated endpoints");
            read += 1;
        }
        if read != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {m} edges, found {read}"),
            });
        }
        Ok(g)
    }

    /// Inverse of [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for (i, j) in self.edges() {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, Error> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("invalid {what}: {tok:?}") })
}

/// Hopcroft-Tarjan block decomposition state. Tree edges are stacked and a
/// block is popped whenever a child subtree cannot reach above its parent.
struct BlockDfs<'a> {
    g: &'a Graph,
    disc: Vec<usize>,
    low: Vec<usize>,
    timer: usize,
    edge_stack: Vec<(usize, usize)>,
    blocks: Vec<Vec<usize>>,
}

impl BlockDfs<'_> {
    fn visit(&mut self, v: usize, parent: usize) {
        self.disc[v] = self.timer;
        self.low[v] = self.timer;
        self.timer += 1;
        for &u in &self.g.adj[v] {
            if self.disc[u] == usize::MAX {
                self.edge_stack.push((v, u));
                self.visit(u, v);
                self.low[v] = self.low[v].min(self.low[u]);
                if self.low[u] >= self.disc[v] {
                    let mut verts = std::collections::BTreeSet::new();
                    while let Some(&(a, b)) = self.edge_stack.last() {
                        self.edge_stack.pop();
                        verts.insert(a);
                        verts.insert(b);
                        if (a, b) == (v, u) {
                            break;
                        }
                    }
                    self.blocks.push(verts.into_iter().collect());
                }
            } else if u != parent && self.disc[u] < self.disc[v] {
                self.edge_stack.push((v, u));
                self.low[v] = self.low[v].min(self.disc[u]);
            }
        }
    }
}
