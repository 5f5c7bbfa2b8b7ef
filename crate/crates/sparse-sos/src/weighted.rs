//! Weighted square decompositions over semialgebraic sets: express
//! `f = Σ_i g_i σ_i` with every `σ_i` a sum of squares, the `g_i` the
//! defining inequalities (plus the implicit `g_0 = 1`), and, in sparse
//! mode, every multiplier supported on one variable clique.

use std::collections::BTreeMap;

use chordal_graph::{chordal_extension, maximal_cliques, mcs, CliqueSet, ExtensionHeuristic};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::csp::joint_csp_graph;
use crate::error::Error;
use crate::gram::{assemble, GramBlock, GramSdp};
use crate::poly::{Exponent, ExponentSet, Polynomial};

/// A basic closed semialgebraic set `{x : g_i(x) ≥ 0}`. The implicit
/// `g_0 ≡ 1` is never stored. Ball radii, when present, append one
/// constraint `r_k² − ‖x_{J_k}‖²` per variable clique, certifying
/// compactness clique by clique.
#[derive(Debug, Clone)]
pub struct SemialgebraicSet {
    pub inequalities: Vec<Polynomial>,
    pub ball_radii: Option<Vec<f64>>,
}

impl SemialgebraicSet {
    pub fn new(inequalities: Vec<Polynomial>) -> Self {
        SemialgebraicSet { inequalities, ball_radii: None }
    }

    pub fn with_ball_radii(mut self, radii: Vec<f64>) -> Self {
        self.ball_radii = Some(radii);
        self
    }
}

/// Assembles the order-`omega` weighted Gram problem for `f` over `K`.
///
/// Dense mode uses one clique holding every variable. Sparse mode takes
/// the maximal cliques of a chordal extension of the joint correlative
/// sparsity graph of `f` and the constraints; each multiplier `σ_i` is
/// then replicated over every clique containing `var(g_i)`, and a
/// constraint fitting no clique is an error.
pub fn weighted_sos_assemble(
    f: &Polynomial,
    k_set: &SemialgebraicSet,
    omega: u32,
    sparse: bool,
) -> Result<GramSdp, Error> {
    let cliques = if sparse {
        let joint = joint_csp_graph(f, &k_set.inequalities)?;
        let ext = chordal_extension(&joint, ExtensionHeuristic::MinDegree);
        let ord = mcs(&ext);
        maximal_cliques(&ext, &ord)?
    } else {
        dense_cliques(f.n())?
    };
    weighted_sos_assemble_with_cliques(f, k_set, omega, &cliques)
}

/// Same assembly against a caller-chosen variable clique set. Cliques
/// built from the joint sparsity graph always house every constraint;
/// hand-picked ones may not, which is the `ConstraintOutsideClique`
/// case.
pub fn weighted_sos_assemble_with_cliques(
    f: &Polynomial,
    k_set: &SemialgebraicSet,
    omega: u32,
    cliques: &CliqueSet,
) -> Result<GramSdp, Error> {
    let n = f.n();
    if cliques.n() != n {
        return Err(Error::Shape(format!(
            "cliques over {} variables, objective has {n}",
            cliques.n()
        )));
    }
    for (i, g) in k_set.inequalities.iter().enumerate() {
        if g.n() != n {
            return Err(Error::Shape(format!(
                "constraint {i} has {} variables, objective has {n}",
                g.n()
            )));
        }
    }
    let mut max_deg = f.degree();
    for g in &k_set.inequalities {
        max_deg = max_deg.max(g.degree());
    }
    if k_set.ball_radii.is_some() {
        max_deg = max_deg.max(2);
    }
    let needed = max_deg.div_ceil(2);
    if omega < needed {
        return Err(Error::OrderTooSmall { needed, given: omega });
    }

    let mut weights: Vec<Polynomial> = Vec::with_capacity(k_set.inequalities.len() + 1);
    weights.push(Polynomial::one(n));
    weights.extend(k_set.inequalities.iter().cloned());

    let mut blocks: Vec<GramBlock> = Vec::new();
    for (i, g) in weights.iter().enumerate() {
        let budget = omega - g.degree().div_ceil(2);
        let homes: Vec<usize> = (0..cliques.len())
            .filter(|&k| g.vars().iter().all(|v| cliques.clique(k).binary_search(v).is_ok()))
            .collect();
        if homes.is_empty() {
            // `g_0 = 1` fits everywhere unless there are no cliques at
            // all, which only happens for constant objectives.
            if i == 0 && n == 0 {
                blocks.push(GramBlock {
                    basis: vec![(0, Exponent::zero(0))],
                    weight: g.clone(),
                });
                continue;
            }
            return Err(Error::ConstraintOutsideClique { constraint: i - 1 });
        }
        let mut seen: Vec<Vec<(usize, Exponent)>> = Vec::new();
        for k in homes {
            let basis = clique_monomials(n, cliques.clique(k), budget);
            if seen.contains(&basis) {
                continue;
            }
            seen.push(basis.clone());
            blocks.push(GramBlock { basis, weight: g.clone() });
        }
    }

    if let Some(radii) = &k_set.ball_radii {
        if radii.len() != cliques.len() {
            return Err(Error::Shape(format!(
                "{} ball radii for {} cliques",
                radii.len(),
                cliques.len()
            )));
        }
        for (k, &r) in radii.iter().enumerate() {
            let ball = ball_constraint(n, cliques.clique(k), r)?;
            let basis = clique_monomials(n, cliques.clique(k), omega - 1);
            blocks.push(GramBlock { basis, weight: ball });
        }
    }

    let mut targets: BTreeMap<(usize, usize, Exponent), BigRational> = BTreeMap::new();
    for (e, c) in f.terms() {
        targets.insert((0, 0, e.clone()), c.clone());
    }
    assemble(1, blocks, targets)
}

fn dense_cliques(n: usize) -> Result<CliqueSet, Error> {
    if n == 0 {
        return Ok(CliqueSet::new(0, vec![])?);
    }
    Ok(CliqueSet::new(n, vec![(0..n).collect()])?)
}

/// Monomials of degree at most `budget` supported on `clique`, embedded
/// into `n` variables and tagged with matrix row 0.
pub(crate) fn clique_monomials(
    n: usize,
    clique: &[usize],
    budget: u32,
) -> Vec<(usize, Exponent)> {
    let local = ExponentSet::monomials(clique.len(), budget);
    local
        .iter()
        .map(|e| {
            let mut full = vec![0u32; n];
            for (pos, &v) in clique.iter().enumerate() {
                full[v] = e.get(pos);
            }
            (0, Exponent::new(full))
        })
        .collect()
}

/// `r² − Σ_{j∈clique} x_j²` with the radius squared exactly as a float.
fn ball_constraint(n: usize, clique: &[usize], r: f64) -> Result<Polynomial, Error> {
    let r2 = BigRational::from_float(r)
        .ok_or_else(|| Error::Shape(format!("ball radius {r} is not finite")))?
        .pow(2);
    let mut terms: Vec<(Exponent, BigRational)> = vec![(Exponent::zero(n), r2)];
    for &j in clique {
        let mut e = vec![0u32; n];
        e[j] = 2;
        terms.push((Exponent::new(e), BigRational::from_integer(BigInt::from(-1))));
    }
    Polynomial::from_terms(n, terms)
}
