//! PSD feasibility for assembled Gram problems by projection methods.
//!
//! The driver alternates a coefficient pass with per-block PSD
//! projections. For unweighted problems the rows touch disjoint Gram
//! entries, so one pass is an exact projection onto the affine
//! coefficient space; weighted rows overlap and the pass becomes a
//! Kaczmarz sweep, which the surrounding scheme tolerates. Problems with
//! a block too large for quick eigenvalue projections are first handed
//! to the decomposed ADMM solver, whose output the projections then
//! polish to certificate accuracy.
//!
//! Feasibility is always decided by the assembled certificate itself:
//! the worst coefficient mismatch of the PSD iterate must fall below
//! `tol_rel · (1 + max |target|)`.

use admm_solver::{psd_project, solve_domain, AdmmSettings};
use chordal_graph::ExtensionHeuristic;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use sdp_model::{domain_decompose, SdpProblem};
use sparse_matrix::SparseSymMatrix;

use crate::error::Error;
use crate::gram::GramSdp;

#[derive(Debug, Clone)]
pub struct SolveSettings {
    /// Relative certificate tolerance.
    pub tol_rel: f64,
    /// Hard cap on projection sweeps.
    pub max_sweeps: usize,
    /// Sweeps without 1% residual improvement before declaring the
    /// problem infeasible.
    pub patience: usize,
    /// Largest block size handled by projections alone.
    pub direct_limit: usize,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings { tol_rel: 1e-6, max_sweeps: 200_000, patience: 10_000, direct_limit: 12 }
    }
}

#[derive(Debug, Clone)]
pub struct GramSolution {
    /// One PSD matrix per block.
    pub mats: Vec<DMatrix<f64>>,
    /// Certified worst coefficient mismatch.
    pub residual: f64,
    pub sweeps: usize,
}

pub fn solve_gram(g: &GramSdp, s: &SolveSettings) -> Result<GramSolution, Error> {
    let tol = s.tol_rel * (1.0 + g.target_scale());
    match forced_zero_positions(g)? {
        None => solve_core(g, s, tol),
        Some(live) => {
            let reduced = restrict(g, &live);
            let sol = solve_core(&reduced, s, tol)?;
            let mats = inflate(g, &live, &sol.mats);
            let residual = g.residual(&mats);
            Ok(GramSolution { mats, residual, sweeps: sol.sweeps })
        }
    }
}

/// Diagonal positions pinned to zero by the rows, closed transitively.
///
/// A zero-target row whose live entries are all diagonal with
/// coefficients of one sign forces each of those diagonals to vanish,
/// and semidefiniteness then zeroes their entire rows. Dropping the dead
/// positions may strand further rows, so the scan repeats to a fixpoint.
/// A nonzero target left with no live entries is an exact infeasibility.
fn forced_zero_positions(g: &GramSdp) -> Result<Option<Vec<Vec<usize>>>, Error> {
    let mut dead: Vec<Vec<bool>> = g.block_sizes().iter().map(|&n| vec![false; n]).collect();
    let mut any = false;
    loop {
        let mut changed = false;
        for row in &g.rows {
            if row.target != 0.0 {
                continue;
            }
            let live: Vec<(usize, usize, usize, f64)> = row
                .entries
                .iter()
                .filter(|&&(k, a, b, _)| !dead[k][a] && !dead[k][b])
                .copied()
                .collect();
            if live.is_empty() {
                continue;
            }
            let diagonal = live.iter().all(|&(_, a, b, _)| a == b);
            let one_sign = live.iter().all(|&(_, _, _, c)| c > 0.0)
                || live.iter().all(|&(_, _, _, c)| c < 0.0);
            if diagonal && one_sign {
                for &(k, a, _, _) in &live {
                    dead[k][a] = true;
                    changed = true;
                    any = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if !any {
        return Ok(None);
    }
    for row in &g.rows {
        if row.target != 0.0
            && row.entries.iter().all(|&(k, a, b, _)| dead[k][a] || dead[k][b])
        {
            return Err(Error::Infeasible { residual: row.target.abs() });
        }
    }
    Ok(Some(
        dead.into_iter()
            .map(|d| (0..d.len()).filter(|&i| !d[i]).collect())
            .collect(),
    ))
}

/// The same problem over the surviving basis positions.
fn restrict(g: &GramSdp, live: &[Vec<usize>]) -> GramSdp {
    let maps: Vec<Vec<Option<usize>>> = g
        .block_sizes()
        .iter()
        .zip(live)
        .map(|(&n, keep)| {
            let mut m = vec![None; n];
            for (pos, &i) in keep.iter().enumerate() {
                m[i] = Some(pos);
            }
            m
        })
        .collect();
    let blocks = g
        .blocks
        .iter()
        .zip(live)
        .map(|(b, keep)| crate::gram::GramBlock {
            basis: keep.iter().map(|&i| b.basis[i].clone()).collect(),
            weight: b.weight.clone(),
        })
        .collect();
    let rows = g
        .rows
        .iter()
        .filter_map(|r| {
            let entries: Vec<(usize, usize, usize, f64)> = r
                .entries
                .iter()
                .filter_map(|&(k, a, b, c)| match (maps[k][a], maps[k][b]) {
                    (Some(x), Some(y)) => Some((k, x, y, c)),
                    _ => None,
                })
                .collect();
            if entries.is_empty() {
                None
            } else {
                Some(crate::gram::GramRow { entries, ..r.clone() })
            }
        })
        .collect();
    GramSdp { dim: g.dim, blocks, rows }
}

fn inflate(g: &GramSdp, live: &[Vec<usize>], small: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    g.block_sizes()
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let mut full = DMatrix::zeros(n, n);
            for (p, &i) in live[k].iter().enumerate() {
                for (q, &j) in live[k].iter().enumerate() {
                    full[(i, j)] = small[k][(p, q)];
                }
            }
            full
        })
        .collect()
}

fn solve_core(g: &GramSdp, s: &SolveSettings, tol: f64) -> Result<GramSolution, Error> {
    if g.blocks.is_empty() || g.rows.is_empty() {
        let residual = g.rows.iter().map(|r| r.target.abs()).fold(0.0, f64::max);
        let mats = g.block_sizes().iter().map(|&n| DMatrix::zeros(n, n)).collect();
        return if residual <= tol {
            Ok(GramSolution { mats, residual, sweeps: 0 })
        } else {
            Err(Error::Infeasible { residual })
        };
    }
    let mut mats: Vec<DMatrix<f64>> =
        g.block_sizes().iter().map(|&n| DMatrix::zeros(n, n)).collect();
    if g.max_block_size() > s.direct_limit {
        admm_seed(g, &mut mats)?;
        for m in mats.iter_mut() {
            if m.nrows() > 0 {
                *m = psd_project(m)?;
            }
        }
    }
    // Squared Frobenius norm of each row's gradient matrix; off-diagonal
    // coefficients carry the folded factor 2, hence the halving.
    let norms: Vec<f64> = g
        .rows
        .iter()
        .map(|r| {
            r.entries
                .iter()
                .map(|&(_, a, b, c)| if a == b { c * c } else { c * c / 2.0 })
                .sum()
        })
        .collect();

    let mut best = f64::INFINITY;
    let mut best_at = 0usize;
    for sweep in 1..=s.max_sweeps {
        for (row, &nn) in g.rows.iter().zip(&norms) {
            if nn == 0.0 {
                continue;
            }
            let delta = (row.target - g.row_value(row, &mats)) / nn;
            if delta == 0.0 {
                continue;
            }
            for &(k, a, b, c) in &row.entries {
                if a == b {
                    mats[k][(a, a)] += delta * c;
                } else {
                    let d = delta * c / 2.0;
                    mats[k][(a, b)] += d;
                    mats[k][(b, a)] += d;
                }
            }
        }
        for m in mats.iter_mut() {
            if m.nrows() > 0 {
                *m = psd_project(m)?;
            }
        }
        if sweep % 10 == 0 || sweep == 1 || sweep == s.max_sweeps {
            let res = g.residual(&mats);
            if res <= tol {
                return Ok(GramSolution { mats, residual: res, sweeps: sweep });
            }
            if sweep == 1 || sweep % 500 == 0 || sweep == s.max_sweeps {
                if let Some((polished, pres)) = polish(g, &mats, tol) {
                    return Ok(GramSolution { mats: polished, residual: pres, sweeps: sweep });
                }
            }
            if res < 0.99 * best {
                best = res;
                best_at = sweep;
            } else if sweep - best_at >= s.patience {
                if let Some((polished, pres)) = polish(g, &mats, tol) {
                    return Ok(GramSolution { mats: polished, residual: pres, sweeps: sweep });
                }
                return Err(Error::Infeasible { residual: res.min(best) });
            }
        }
    }
    match polish(g, &mats, tol) {
        Some((polished, pres)) => Ok(GramSolution {
            mats: polished,
            residual: pres,
            sweeps: s.max_sweeps,
        }),
        None => Err(Error::Infeasible { residual: g.residual(&mats) }),
    }
}

/// Low-rank refinement of a stalled iterate.
///
/// Problems whose every Gram solution is singular (the target vanishes
/// somewhere, so some basis evaluation vector lies in every kernel) make
/// plain alternating projections crawl: the affine space meets the PSD
/// product tangentially. Writing each block as V·Vᵀ removes the cone
/// constraint entirely, and Levenberg-Marquardt on the coefficient
/// equations in the factors converges fast regardless of that geometry.
/// Candidate ranks come from the iterate's spectrum at a ladder of
/// relative cuts, ending with full rank. Candidates are accepted only if
/// the reconstructed PSD matrices pass the absolute residual check, so a
/// misread rank costs nothing.
fn polish(g: &GramSdp, mats: &[DMatrix<f64>], tol: f64) -> Option<(Vec<DMatrix<f64>>, f64)> {
    let eigs: Vec<Option<SymmetricEigen<f64, nalgebra::Dyn>>> = mats
        .iter()
        .map(|m| (m.nrows() > 0).then(|| SymmetricEigen::new(m.clone())))
        .collect();
    let mut tried: Vec<Vec<usize>> = Vec::new();
    for cut in [1e-1, 3e-2, 1e-2, 1e-3, 1e-4, 0.0] {
        let ranks: Vec<usize> = eigs
            .iter()
            .zip(mats)
            .map(|(se, m)| match se {
                None => 0,
                Some(_) if cut == 0.0 => m.nrows(),
                Some(se) => {
                    let scale = se.eigenvalues.iter().fold(1e-9f64, |m, &v| m.max(v));
                    se.eigenvalues.iter().filter(|&&v| v > cut * scale).count()
                }
            })
            .collect();
        if tried.contains(&ranks) {
            continue;
        }
        tried.push(ranks.clone());
        if let Some(hit) = refine(g, &eigs, &ranks, tol) {
            return Some(hit);
        }
    }
    None
}

/// Gauss-Newton steps with adaptive damping on A(V·Vᵀ) = b.
fn refine(
    g: &GramSdp,
    eigs: &[Option<SymmetricEigen<f64, nalgebra::Dyn>>],
    ranks: &[usize],
    tol: f64,
) -> Option<(Vec<DMatrix<f64>>, f64)> {
    let sizes = g.block_sizes();
    let mut cols = Vec::with_capacity(ranks.len());
    let mut nvars = 0usize;
    for (k, &r) in ranks.iter().enumerate() {
        cols.push(nvars);
        nvars += sizes[k] * r;
    }
    let rows = g.rows.len();
    if nvars == 0
        || nvars > 4_000
        || rows > 2_000
        || rows.saturating_mul(nvars) > 20_000_000
    {
        return None;
    }

    // Factors start from the scaled top eigenvectors; ranks beyond the
    // matrix's order get zero columns, which the damping keeps tame.
    let mut vs: Vec<DMatrix<f64>> = Vec::with_capacity(ranks.len());
    for (k, &r) in ranks.iter().enumerate() {
        let n = sizes[k];
        let v = match &eigs[k] {
            None => DMatrix::zeros(n, r),
            Some(se) => {
                let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
                order.sort_by(|&i, &j| {
                    se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).unwrap()
                });
                DMatrix::from_fn(n, r, |i, j| {
                    let e = order[j];
                    se.eigenvectors[(i, e)] * se.eigenvalues[e].max(0.0).sqrt()
                })
            }
        };
        vs.push(v);
    }

    let eval = |vs: &[DMatrix<f64>]| -> DVector<f64> {
        let mut f = DVector::zeros(rows);
        for (ri, row) in g.rows.iter().enumerate() {
            let mut v = -row.target;
            for &(k, a, b, c) in &row.entries {
                v += c * vs[k].row(a).dot(&vs[k].row(b));
            }
            f[ri] = v;
        }
        f
    };

    let mut f = eval(&vs);
    let mut lambda = 1e-6f64;
    for _ in 0..120 {
        if f.amax() <= tol {
            let out: Vec<DMatrix<f64>> =
                vs.iter().map(|v| v * v.transpose()).collect();
            let res = g.residual(&out);
            if res <= tol {
                return Some((out, res));
            }
        }
        let mut jac = DMatrix::zeros(rows, nvars);
        for (ri, row) in g.rows.iter().enumerate() {
            for &(k, a, b, c) in &row.entries {
                let r = ranks[k];
                for s in 0..r {
                    jac[(ri, cols[k] + a * r + s)] += c * vs[k][(b, s)];
                    jac[(ri, cols[k] + b * r + s)] += c * vs[k][(a, s)];
                }
            }
        }
        let jtj: DMatrix<f64> = jac.transpose() * &jac;
        let grad = jac.transpose() * &f;
        let fnorm = f.norm();
        let mut accepted = false;
        for _ in 0..10 {
            let mut damped = jtj.clone();
            let floor = 1e-12 * (jtj.diagonal().max() + 1.0);
            for i in 0..nvars {
                damped[(i, i)] += lambda * jtj[(i, i)] + floor;
            }
            let Some(chol) = damped.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&grad));
            let mut cand = vs.clone();
            for (k, &r) in ranks.iter().enumerate() {
                for i in 0..sizes[k] {
                    for s in 0..r {
                        cand[k][(i, s)] += delta[cols[k] + i * r + s];
                    }
                }
            }
            let fc = eval(&cand);
            if fc.norm() < fnorm {
                vs = cand;
                f = fc;
                lambda = (lambda * 0.3).max(1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            return None;
        }
    }
    None
}

/// Routes the problem through the clique-decomposed ADMM solver as one
/// block-diagonal feasibility SDP (zero objective) and copies the block
/// iterates back as the polishing start.
fn admm_seed(g: &GramSdp, mats: &mut [DMatrix<f64>]) -> Result<(), Error> {
    let sizes = g.block_sizes();
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut n = 0usize;
    for &s in &sizes {
        offsets.push(n);
        n += s;
    }
    let c = SparseSymMatrix::from_triples(n, &[]).map_err(sdp_model::Error::from)?;
    let mut a_mats = Vec::with_capacity(g.rows.len());
    let mut b = Vec::with_capacity(g.rows.len());
    for row in &g.rows {
        let triples: Vec<(usize, usize, f64)> = row
            .entries
            .iter()
            .map(|&(k, i, j, coeff)| {
                let (i, j) = (offsets[k] + i, offsets[k] + j);
                // Frobenius pairing counts both symmetric positions.
                (i, j, if i == j { coeff } else { coeff / 2.0 })
            })
            .collect();
        a_mats.push(SparseSymMatrix::from_triples(n, &triples).map_err(sdp_model::Error::from)?);
        b.push(row.target);
    }
    let block_structure: Vec<i64> =
        sizes.iter().filter(|&&s| s > 0).map(|&s| s as i64).collect();
    let p = SdpProblem::new(c, a_mats, b, Some(block_structure))?;
    let d = domain_decompose(p, ExtensionHeuristic::MinDegree);
    let settings = AdmmSettings {
        eps_abs: 1e-7,
        eps_rel: 1e-7,
        max_iter: 20_000,
        ..Default::default()
    };
    // MaxIter is acceptable here: the sweeps polish whatever comes back,
    // and infeasibility is decided by their stall, not by this solve.
    let sol = solve_domain(&d, &settings)?;
    if let Some(x) = sol.x() {
        let dense = x.to_dense();
        for (k, m) in mats.iter_mut().enumerate() {
            let off = offsets[k];
            for i in 0..sizes[k] {
                for j in 0..sizes[k] {
                    m[(i, j)] = dense[(off + i, off + j)];
                }
            }
        }
    }
    Ok(())
}
