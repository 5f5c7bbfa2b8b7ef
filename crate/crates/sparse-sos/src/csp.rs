//! Correlative sparsity: which variables interact, and how a monomial
//! basis splits along the variable cliques.

use chordal_graph::{CliqueSet, Graph};

use crate::error::Error;
use crate::poly::{ExponentSet, Polynomial};

/// Correlative sparsity graph of `f`: vertices are variables, with an
/// edge whenever two variables appear in a common monomial.
pub fn csp_graph(f: &Polynomial) -> Graph {
    let mut g = Graph::new(f.n());
    for (e, _) in f.terms() {
        let vars = e.vars();
        for (a, &i) in vars.iter().enumerate() {
            for &j in &vars[a + 1..] {
                g.add_edge(i, j).expect("variable indices are in range");
            }
        }
    }
    g
}

/// Joint pattern for constrained problems: objective monomials connect
/// their variables as in [`csp_graph`], and each constraint connects all
/// of its variables regardless of how they enter it.
pub fn joint_csp_graph(f: &Polynomial, constraints: &[Polynomial]) -> Result<Graph, Error> {
    let mut g = csp_graph(f);
    for (idx, gi) in constraints.iter().enumerate() {
        if gi.n() != f.n() {
            return Err(Error::Shape(format!(
                "constraint {idx} has {} variables, objective has {}",
                gi.n(),
                f.n()
            )));
        }
        let vars = gi.vars();
        for (a, &i) in vars.iter().enumerate() {
            for &j in &vars[a + 1..] {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Restricts a monomial basis to variable cliques: clique `k` keeps the
/// basis positions whose variables all lie in `J_k`. Constants land in
/// every clique. Restrictions that end up empty or contained in another
/// are dropped, so the result is a valid clique set over basis indices.
pub fn csp_cliques(basis: &ExponentSet, var_cliques: &CliqueSet) -> Result<CliqueSet, Error> {
    let mut restricted: Vec<Vec<usize>> = Vec::new();
    for j in var_cliques.iter() {
        let c: Vec<usize> =
            (0..basis.len()).filter(|&i| basis.get(i).supported_on(j)).collect();
        if !c.is_empty() {
            restricted.push(c);
        }
    }
    restricted.sort();
    restricted.dedup();
    let keep: Vec<Vec<usize>> = restricted
        .iter()
        .filter(|c| {
            !restricted
                .iter()
                .any(|d| d.len() > c.len() && c.iter().all(|v| d.binary_search(v).is_ok()))
        })
        .cloned()
        .collect();
    Ok(CliqueSet::new(basis.len(), keep)?)
}
