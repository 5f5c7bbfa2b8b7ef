//! Sparse sum-of-squares decompositions of polynomial matrices. A
//! matrix `P(x)` with chordal row sparsity is written, after scaling by
//! a positive multiplier `m(x)`, as `m·P = Σ_k E_kᵀ S_k(x) E_k` where
//! each `S_k` is an SOS matrix on one row clique. Scalarization puts
//! every `S_k` into a single Gram block over row-monomial pairs.

use std::collections::{BTreeMap, BTreeSet};

use chordal_graph::{is_chordal, CliqueSet, Graph};
use num_rational::BigRational;

use crate::error::Error;
use crate::gram::{assemble, GramBlock, GramSdp};
use crate::poly::{Exponent, ExponentSet, Polynomial};
use crate::solve::{solve_gram, GramSolution, SolveSettings};
use crate::weighted::SemialgebraicSet;

/// Square grid of polynomials in a shared variable set.
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    r: usize,
    n: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    /// Builds from rows; every row must have length equal to the row
    /// count and every entry the same variable count.
    pub fn new(rows: Vec<Vec<Polynomial>>) -> Result<Self, Error> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Shape("empty polynomial matrix".into()));
        }
        let n = rows[0][0].n();
        let mut entries = Vec::with_capacity(r * r);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != r {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {r}", row.len())));
            }
            for p in row {
                if p.n() != n {
                    return Err(Error::Shape(format!(
                        "entry with {} variables in a {n}-variable matrix",
                        p.n()
                    )));
                }
                entries.push(p.clone());
            }
        }
        Ok(PolyMatrix { r, n, entries })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.r + j]
    }

    /// Positions of the first asymmetric entry pair, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.r {
            for j in i + 1..self.r {
                if self.entry(i, j) != self.entry(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Row sparsity graph: vertices are rows, edges the nonzero
    /// off-diagonal entries.
    pub fn structure(&self) -> Graph {
        let mut g = Graph::new(self.r);
        for i in 0..self.r {
            for j in i + 1..self.r {
                if !self.entry(i, j).is_zero() {
                    g.add_edge(i, j).expect("indices in range");
                }
            }
        }
        g
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Entrywise product with a scalar polynomial.
    fn scaled(&self, m: &Polynomial) -> PolyMatrix {
        PolyMatrix {
            r: self.r,
            n: self.n,
            entries: self.entries.iter().map(|p| p.mul(m)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplier {
    /// `‖x‖₂^{2ν}`; natural for homogeneous matrices.
    NormPower,
    /// `(1 + ‖x‖₂²)^ν`; keeps the constant coefficient alive.
    OnePlusNorm,
}

impl Multiplier {
    pub fn polynomial(&self, n: usize, nu: usize) -> Polynomial {
        let mut norm = Polynomial::zero(n);
        for j in 0..n {
            norm = norm.add(&Polynomial::variable(n, j).pow(2));
        }
        let base = match self {
            Multiplier::NormPower => norm,
            Multiplier::OnePlusNorm => Polynomial::one(n).add(&norm),
        };
        base.pow(nu as u32)
    }
}

/// Assembles the Gram feasibility problem for
/// `m(x)·P(x) = Σ_k E_kᵀ S_k(x) E_k` with one PSD block per row clique,
/// scalarized over (row, monomial) pairs. With `k_set` present, each
/// clique also receives one `g_i`-weighted block per inequality.
pub fn matrix_sos_assemble(
    p: &PolyMatrix,
    cliques: &CliqueSet,
    nu: usize,
    multiplier: Multiplier,
    k_set: Option<&SemialgebraicSet>,
) -> Result<GramSdp, Error> {
    if let Some((row, col)) = p.asymmetry() {
        return Err(Error::Asymmetric { row, col });
    }
    if cliques.n() != p.r() {
        return Err(Error::Shape(format!(
            "cliques over {} rows, matrix has {}",
            cliques.n(),
            p.r()
        )));
    }
    let structure = p.structure();
    if !cliques.covers_edges(&structure) {
        return Err(Error::Shape("row cliques miss a nonzero entry of the matrix".into()));
    }
    let mut cover = Graph::new(p.r());
    for c in cliques.iter() {
        for (a, &i) in c.iter().enumerate() {
            for &j in &c[a + 1..] {
                cover.add_edge(i, j).expect("indices in range");
            }
        }
    }
    if !is_chordal(&cover) {
        return Err(Error::NotChordal);
    }

    let m = multiplier.polynomial(p.n(), nu);
    let target = p.scaled(&m);
    let mut weights: Vec<Polynomial> = vec![Polynomial::one(p.n())];
    if let Some(k) = k_set {
        for (i, g) in k.inequalities.iter().enumerate() {
            if g.n() != p.n() {
                return Err(Error::Shape(format!(
                    "constraint {i} has {} variables, matrix has {}",
                    g.n(),
                    p.n()
                )));
            }
            weights.push(g.clone());
        }
    }

    // Degree window of the scaled targets decides the shared monomial
    // degree range: hi covers the top, lo prunes when every entry is
    // bottom-heavy (homogeneous matrices get an exact-degree basis).
    let deg_hi = target.max_degree();
    let deg_lo = target
        .entries
        .iter()
        .filter(|p| !p.is_zero())
        .map(Polynomial::degree_min)
        .min()
        .unwrap_or(0);
    let omega = deg_hi.div_ceil(2);

    let mut blocks: Vec<GramBlock> = Vec::new();
    for c in cliques.iter() {
        let mut vars: BTreeSet<usize> = BTreeSet::new();
        for &i in c {
            for &j in c {
                vars.extend(target.entry(i, j).vars());
            }
        }
        let vars: Vec<usize> = vars.into_iter().collect();
        for w in &weights {
            let shift = w.degree().div_ceil(2);
            if omega < shift {
                return Err(Error::OrderTooSmall { needed: shift, given: omega });
            }
            // Low-degree pruning is only certificate-preserving when
            // the identity has no constraint multipliers to cancel
            // against.
            let lo = if weights.len() == 1 { deg_lo / 2 } else { 0 };
            let basis = windowed_monomials(p.n(), &vars, lo, omega - shift);
            let mut entries = Vec::with_capacity(c.len() * basis.len());
            for &row in c {
                for e in &basis {
                    entries.push((row, e.clone()));
                }
            }
            blocks.push(GramBlock { basis: entries, weight: w.clone() });
        }
    }

    let mut targets: BTreeMap<(usize, usize, Exponent), BigRational> = BTreeMap::new();
    for i in 0..p.r() {
        for j in i..p.r() {
            for (e, c) in target.entry(i, j).terms() {
                targets.insert((i, j, e.clone()), c.clone());
            }
        }
    }
    assemble(p.r(), blocks, targets)
}

/// Increments `ν` until the scaled matrix admits a decomposition, up to
/// `max_nu`. Returns the first certified level.
pub fn matrix_sos_scan(
    p: &PolyMatrix,
    cliques: &CliqueSet,
    max_nu: usize,
    multiplier: Multiplier,
    settings: &SolveSettings,
) -> Result<(usize, GramSdp, GramSolution), Error> {
    let mut last = Err(Error::Infeasible { residual: f64::INFINITY });
    for nu in 0..=max_nu {
        let g = matrix_sos_assemble(p, cliques, nu, multiplier, None)?;
        match solve_gram(&g, settings) {
            Ok(sol) => return Ok((nu, g, sol)),
            Err(Error::Infeasible { residual }) => last = Err(Error::Infeasible { residual }),
            Err(e) => return Err(e),
        }
    }
    last
}

/// Monomials over `vars` (indices into an `n`-variable ring) with
/// degree in `[lo, hi]`.
fn windowed_monomials(n: usize, vars: &[usize], lo: u32, hi: u32) -> Vec<Exponent> {
    let local = ExponentSet::monomials(vars.len(), hi);
    local
        .iter()
        .filter(|e| e.degree() >= lo)
        .map(|e| {
            let mut full = vec![0u32; n];
            for (pos, &v) in vars.iter().enumerate() {
                full[v] = e.get(pos);
            }
            Exponent::new(full)
        })
        .collect()
}
