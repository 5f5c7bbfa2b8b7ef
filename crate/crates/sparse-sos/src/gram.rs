//! Coefficient-matching Gram problems. A problem is a list of PSD blocks
//! and linear rows: block `k` contributes `weight_k · (u ⊗ x^{B_k})ᵀ S_k
//! (u ⊗ x^{B_k})` and each row pins one coefficient of the assembled
//! (matrix) polynomial to its target. Coefficients reachable by some
//! block but absent from the target get zero-target rows, so solutions
//! reproduce the target exactly rather than merely covering it.

use std::collections::BTreeMap;

use chordal_graph::CliqueSet;
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::poly::{Exponent, ExponentSet, Polynomial};

/// One PSD block. Scalar problems put every basis position at matrix
/// row zero; matrix problems tensor rows with monomials.
#[derive(Debug, Clone)]
pub struct GramBlock {
    pub basis: Vec<(usize, Exponent)>,
    pub weight: Polynomial,
}

/// One linear row: `Σ coeff · S_block[a][b] = target`, ranging over the
/// listed entries with `a ≤ b`. Symmetry factors are folded into the
/// coefficients.
#[derive(Debug, Clone)]
pub struct GramRow {
    pub row: usize,
    pub col: usize,
    pub exponent: Exponent,
    pub target: f64,
    pub entries: Vec<(usize, usize, usize, f64)>,
}

#[derive(Debug, Clone)]
pub struct GramSdp {
    /// Assembled matrix dimension; 1 for scalar problems.
    pub dim: usize,
    pub blocks: Vec<GramBlock>,
    pub rows: Vec<GramRow>,
}

/// Scalar Gram problem for `f = Σ_k σ_k` over basis cliques: clique `k`
/// owns the basis positions it lists and contributes one square form.
pub fn gram_sdp(
    f: &Polynomial,
    basis: &ExponentSet,
    cliques: &CliqueSet,
) -> Result<GramSdp, Error> {
    if cliques.n() != basis.len() {
        return Err(Error::Shape(format!(
            "clique set addresses {} positions, basis has {}",
            cliques.n(),
            basis.len()
        )));
    }
    let blocks: Vec<GramBlock> = cliques
        .iter()
        .map(|c| GramBlock {
            basis: c.iter().map(|&i| (0, basis.get(i).clone())).collect(),
            weight: Polynomial::one(f.n()),
        })
        .collect();
    let targets: BTreeMap<(usize, usize, Exponent), BigRational> =
        f.terms().map(|(e, c)| ((0, 0, e.clone()), c.clone())).collect();
    assemble(1, blocks, targets)
}

/// Shared assembly: expands every block product against its weight and
/// matches coefficients to targets. Targets unreachable by any block
/// entry are reported as uncovered.
pub(crate) fn assemble(
    dim: usize,
    blocks: Vec<GramBlock>,
    targets: BTreeMap<(usize, usize, Exponent), BigRational>,
) -> Result<GramSdp, Error> {
    type Key = (usize, usize, Exponent);
    let mut reach: BTreeMap<Key, Vec<(usize, usize, usize, f64)>> = BTreeMap::new();
    for (k, block) in blocks.iter().enumerate() {
        for a in 0..block.basis.len() {
            for b in a..block.basis.len() {
                let (ra, ea) = &block.basis[a];
                let (rb, eb) = &block.basis[b];
                let (row, col) = (*ra.min(rb), *ra.max(rb));
                // A diagonal matrix entry receives both orderings of an
                // off-diagonal Gram entry; distinct matrix rows only one.
                let mult = if a == b || ra != rb { 1.0 } else { 2.0 };
                let pair = ea.add(eb);
                for (delta, w) in block.weight.terms() {
                    let alpha = pair.add(delta);
                    let coeff = mult * w.to_f64().unwrap_or(f64::NAN);
                    reach.entry((row, col, alpha)).or_default().push((k, a, b, coeff));
                }
            }
        }
    }

    let mut rows = Vec::new();
    let mut uncovered = Vec::new();
    let mut keys: Vec<Key> = reach.keys().cloned().collect();
    for key in targets.keys() {
        if !reach.contains_key(key) {
            keys.push(key.clone());
        }
    }
    keys.sort();
    for key in keys {
        let target_rat = targets.get(&key);
        let entries = reach.remove(&key).unwrap_or_default();
        if entries.is_empty() {
            match target_rat {
                Some(t) if !t.is_zero() => uncovered.push(key.2.clone()),
                _ => {}
            }
            continue;
        }
        let target = target_rat.map_or(0.0, |t| t.to_f64().unwrap_or(f64::NAN));
        rows.push(GramRow { row: key.0, col: key.1, exponent: key.2, target, entries });
    }
    if !uncovered.is_empty() {
        uncovered.sort();
        uncovered.dedup();
        return Err(Error::SupportNotCovered { uncovered });
    }
    Ok(GramSdp { dim, blocks, rows })
}

impl GramSdp {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.basis.len()).collect()
    }

    pub fn max_block_size(&self) -> usize {
        self.block_sizes().into_iter().max().unwrap_or(0)
    }

    /// Largest target magnitude; the natural scale for residual
    /// tolerances.
    pub fn target_scale(&self) -> f64 {
        self.rows.iter().map(|r| r.target.abs()).fold(0.0, f64::max)
    }

    pub fn row_value(&self, row: &GramRow, mats: &[DMatrix<f64>]) -> f64 {
        row.entries.iter().map(|&(k, a, b, c)| c * mats[k][(a, b)]).sum()
    }

    /// Worst coefficient mismatch of candidate blocks against the rows.
    pub fn residual(&self, mats: &[DMatrix<f64>]) -> f64 {
        self.rows
            .iter()
            .map(|r| (self.row_value(r, mats) - r.target).abs())
            .fold(0.0, f64::max)
    }

    /// The bare square form of block `k` (weight not applied), expanded
    /// into coefficients keyed by matrix entry and exponent.
    pub fn block_form(
        &self,
        k: usize,
        mat: &DMatrix<f64>,
    ) -> BTreeMap<(usize, usize, Exponent), f64> {
        let block = &self.blocks[k];
        let mut out: BTreeMap<(usize, usize, Exponent), f64> = BTreeMap::new();
        for a in 0..block.basis.len() {
            for b in a..block.basis.len() {
                let (ra, ea) = &block.basis[a];
                let (rb, eb) = &block.basis[b];
                let (row, col) = (*ra.min(rb), *ra.max(rb));
                let mult = if a == b || ra != rb { 1.0 } else { 2.0 };
                let v = mult * mat[(a, b)];
                if v != 0.0 {
                    *out.entry((row, col, ea.add(eb))).or_insert(0.0) += v;
                }
            }
        }
        out
    }
}
