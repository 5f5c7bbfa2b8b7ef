//! End-to-end square decompositions: pick a basis, pick a block
//! structure, solve the Gram feasibility problem, and certify the
//! result by re-expanding the squares.

use chordal_graph::{all_maximal_cliques, CliqueSet};
use nalgebra::DMatrix;

use crate::csp::{csp_cliques, csp_graph};
use crate::error::Error;
use crate::gram::gram_sdp;
use crate::newton::newton_basis;
use crate::poly::{Exponent, ExponentSet, Polynomial};
use crate::solve::{solve_gram, SolveSettings};
use crate::tssos::{cs_tssos_edges, pattern_cliques, tssos_edges, SupportExtension};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Full monomial basis up to half the degree, one block.
    Dense,
    /// Newton polytope basis, one block.
    Newton,
    /// Newton basis split along the correlative variable cliques.
    Csp,
    /// Term-sparsity hierarchy with block completion.
    Tssos,
    /// Term-sparsity hierarchy with chordal completion.
    ChordalTssos,
    /// Correlatively pruned term-sparsity hierarchy.
    CsTssos,
}

impl Strategy {
    pub fn parse(s: &str) -> Option<Strategy> {
        match s {
            "dense" => Some(Strategy::Dense),
            "newton" => Some(Strategy::Newton),
            "csp" => Some(Strategy::Csp),
            "tssos" => Some(Strategy::Tssos),
            "chordal-tssos" => Some(Strategy::ChordalTssos),
            "cs-tssos" => Some(Strategy::CsTssos),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Dense => "dense",
            Strategy::Newton => "newton",
            Strategy::Csp => "csp",
            Strategy::Tssos => "tssos",
            Strategy::ChordalTssos => "chordal-tssos",
            Strategy::CsTssos => "cs-tssos",
        }
    }
}

/// One square form of a certificate: `σ = (x^C)ᵀ G (x^C)`.
#[derive(Debug, Clone)]
pub struct SosPiece {
    pub monomials: Vec<Exponent>,
    pub gram: DMatrix<f64>,
    /// σ expanded into coefficients, sorted by exponent.
    pub poly: Vec<(Exponent, f64)>,
}

#[derive(Debug, Clone)]
pub struct SosCertificate {
    pub strategy: Strategy,
    /// Hierarchy step that produced the certificate (1-based); always 1
    /// for the non-iterative strategies.
    pub step: usize,
    pub pieces: Vec<SosPiece>,
    /// Worst coefficient mismatch of Σ σ_k against f.
    pub residual: f64,
}

impl SosCertificate {
    /// Block sizes in decreasing order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.pieces.iter().map(|p| p.monomials.len()).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

/// Decides membership of `f` in the sum-of-squares cone carved out by
/// `strategy`. Iterative strategies walk the hierarchy from its sparsest
/// step and certify the first feasible one; sparse infeasibility of
/// every step reports the final residual and does not rule out a dense
/// decomposition.
pub fn sos_check(
    f: &Polynomial,
    strategy: Strategy,
    settings: &SolveSettings,
) -> Result<SosCertificate, Error> {
    let degree = f.degree();
    if degree % 2 == 1 {
        return Err(Error::OddDegree { degree });
    }
    let basis = match strategy {
        Strategy::Dense => ExponentSet::monomials(f.n(), degree / 2),
        _ => newton_basis(f)?,
    };
    let supp = f.support();

    let stages: Vec<(ExponentSet, CliqueSet)> = match strategy {
        Strategy::Dense | Strategy::Newton => {
            vec![(basis.clone(), one_clique(basis.len())?)]
        }
        Strategy::Csp => {
            let vars = all_maximal_cliques(&csp_graph(f))?;
            vec![(basis.clone(), csp_cliques(&basis, &vars)?)]
        }
        Strategy::Tssos | Strategy::ChordalTssos => {
            let ext = if strategy == Strategy::Tssos {
                SupportExtension::Block
            } else {
                SupportExtension::Chordal
            };
            let chain = tssos_edges(&supp, &basis, ext, basis.len() * basis.len() + 1)?;
            chain
                .iter()
                .map(|p| Ok((basis.clone(), pattern_cliques(p)?)))
                .collect::<Result<_, Error>>()?
        }
        Strategy::CsTssos => {
            let vars = all_maximal_cliques(&csp_graph(f))?;
            let (pruned, chain) = cs_tssos_edges(
                &supp,
                &basis,
                SupportExtension::Block,
                &vars,
                basis.len() * basis.len() + 1,
            )?;
            chain
                .iter()
                .map(|p| Ok((pruned.clone(), pattern_cliques(p)?)))
                .collect::<Result<_, Error>>()?
        }
    };

    let mut last_residual = f64::INFINITY;
    for (step, (stage_basis, cliques)) in stages.iter().enumerate() {
        let g = gram_sdp(f, stage_basis, cliques)?;
        match solve_gram(&g, settings) {
            Ok(sol) => {
                let pieces = (0..g.blocks.len())
                    .map(|k| {
                        let monomials: Vec<Exponent> =
                            g.blocks[k].basis.iter().map(|(_, e)| e.clone()).collect();
                        let poly: Vec<(Exponent, f64)> = g
                            .block_form(k, &sol.mats[k])
                            .into_iter()
                            .map(|((_, _, e), c)| (e, c))
                            .collect();
                        SosPiece { monomials, gram: sol.mats[k].clone(), poly }
                    })
                    .collect();
                return Ok(SosCertificate {
                    strategy,
                    step: step + 1,
                    pieces,
                    residual: sol.residual,
                });
            }
            Err(Error::Infeasible { residual }) => last_residual = residual,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Infeasible { residual: last_residual })
}

fn one_clique(len: usize) -> Result<CliqueSet, Error> {
    if len == 0 {
        return Ok(CliqueSet::new(0, vec![])?);
    }
    Ok(CliqueSet::new(len, vec![(0..len).collect()])?)
}
