//! Operator-splitting drivers over a clique decomposition. The domain
//! solver iterates on the primal variable of `min ⟨C,X⟩`; the range
//! solver on the dual variable of `max bᵀy`. Both alternate an
//! equality-constrained quadratic step solved through the cached
//! [`KktSystem`], independent per-clique PSD projections, and a
//! multiplier update.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use sdp_model::{DecomposedSdp, Mode};
use sparse_matrix::{max_det_complete_with_tolerance, SparseSymMatrix};

use crate::error::Error;
use crate::kkt::KktSystem;
use crate::project::project_unchecked;
use crate::svec::{
    clique_maps, mat_to_svec, membership_counts, svec_to_mat, CliqueMap, SvecLayout,
};

/// Below this clique count the projection pass runs serially; the
/// per-clique results are independent either way, so the thread count
/// never changes the iterates.
const PAR_THRESHOLD: usize = 8;

#[derive(Debug, Clone)]
pub struct AdmmSettings {
    /// Penalty ρ > 0 on the clique consistency terms.
    pub rho: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub max_iter: usize,
    /// Residual-balancing penalty updates. The cached KKT factorization
    /// does not depend on ρ, so toggling this costs nothing per step.
    pub adaptive_rho: bool,
    /// Residuals are evaluated every this many iterations.
    pub check_every: usize,
}

impl Default for AdmmSettings {
    fn default() -> Self {
        AdmmSettings {
            rho: 1.0,
            eps_abs: 1e-5,
            eps_rel: 1e-5,
            max_iter: 20_000,
            adaptive_rho: false,
            check_every: 25,
        }
    }
}

impl AdmmSettings {
    fn validate(&self) -> Result<(), Error> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidSettings(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.eps_abs > 0.0) || !(self.eps_rel > 0.0) {
            return Err(Error::InvalidSettings("tolerances must be positive".into()));
        }
        if self.max_iter == 0 || self.check_every == 0 {
            return Err(Error::InvalidSettings("iteration counts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Solved,
    MaxIter,
}

/// Iteration variables. Domain mode fills `x` (global point in svec
/// coordinates) and the clique copies; range mode fills `y` and the
/// per-clique slices `v` of the dual cone variable. Clique variables
/// and multipliers are local svec vectors of length |C_k|(|C_k|+1)/2.
pub struct AdmmState {
    pub(crate) x: Vec<f64>,
    pub(crate) y: Vec<f64>,
    pub(crate) v: Vec<Vec<f64>>,
    pub(crate) clique_vars: Vec<Vec<f64>>,
    pub(crate) multipliers: Vec<Vec<f64>>,
    pub(crate) sizes: Vec<usize>,
    pub(crate) iter: usize,
}

impl AdmmState {
    fn new(maps: &[CliqueMap], dim: usize, m: usize, mode: Mode) -> Self {
        let zeros: Vec<Vec<f64>> = maps.iter().map(|mp| vec![0.0; mp.svec_dim()]).collect();
        AdmmState {
            x: if mode == Mode::Domain { vec![0.0; dim] } else { Vec::new() },
            y: if mode == Mode::Range { vec![0.0; m] } else { Vec::new() },
            v: if mode == Mode::Range { zeros.clone() } else { Vec::new() },
            clique_vars: zeros.clone(),
            multipliers: zeros,
            sizes: maps.iter().map(|mp| mp.size).collect(),
            iter: 0,
        }
    }

    pub fn iter(&self) -> usize {
        self.iter
    }

    pub fn cliques(&self) -> usize {
        self.clique_vars.len()
    }

    /// Current clique variable as a dense matrix.
    pub fn clique_var(&self, k: usize) -> DMatrix<f64> {
        svec_to_mat(self.sizes[k], &self.clique_vars[k])
    }

    /// Current scaled multiplier as a dense matrix.
    pub fn multiplier(&self, k: usize) -> DMatrix<f64> {
        svec_to_mat(self.sizes[k], &self.multipliers[k])
    }
}

#[derive(Debug)]
pub struct Solution {
    objective: f64,
    x: Option<SparseSymMatrix>,
    x_completed: Option<DMatrix<f64>>,
    y: Option<Vec<f64>>,
    primal_res: f64,
    dual_res: f64,
    status: Status,
    iterations: usize,
}

impl Solution {
    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// Primal point on the decomposition pattern (domain mode only).
    pub fn x(&self) -> Option<&SparseSymMatrix> {
        self.x.as_ref()
    }

    /// Maximum-determinant completion of the primal point; present when
    /// a domain solve converged and the iterate completed cleanly.
    pub fn x_completed(&self) -> Option<&DMatrix<f64>> {
        self.x_completed.as_ref()
    }

    /// Dual vector (range mode only).
    pub fn y(&self) -> Option<&[f64]> {
        self.y.as_deref()
    }

    pub fn primal_res(&self) -> f64 {
        self.primal_res
    }

    pub fn dual_res(&self) -> f64 {
        self.dual_res
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

struct Workspace {
    layout: SvecLayout,
    maps: Vec<CliqueMap>,
    dinv: Vec<f64>,
    cfull: Vec<f64>,
    avecs: Vec<Vec<(usize, f64)>>,
    b: Vec<f64>,
    kkt: KktSystem,
}

impl Workspace {
    fn new(d: &DecomposedSdp) -> Result<Self, Error> {
        let layout = SvecLayout::new(d.pattern().clone());
        let maps = clique_maps(&layout, d.cliques());
        let counts = membership_counts(&layout, &maps);
        let dinv: Vec<f64> = counts.iter().map(|&c| 1.0 / c).collect();
        let mut cfull = vec![0.0; layout.dim()];
        for (g, v) in layout.vectorize(d.base().c()) {
            cfull[g] = v;
        }
        let avecs: Vec<Vec<(usize, f64)>> =
            d.base().a().iter().map(|a| layout.vectorize(a)).collect();
        let kkt = KktSystem::assemble(&avecs, &dinv, layout.dim())?;
        Ok(Workspace { layout, maps, dinv, cfull, avecs, b: d.base().b().to_vec(), kkt })
    }

    fn dim(&self) -> usize {
        self.cfull.len()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Per-clique PSD projection of `shift_sign * multipliers + H x`
/// written into `out`; parallel above [`PAR_THRESHOLD`] cliques.
fn project_cliques(
    maps: &[CliqueMap],
    gather_from: &[f64],
    multipliers: &[Vec<f64>],
    shift_sign: f64,
    out: &mut [Vec<f64>],
) {
    let one = |k: usize, slot: &mut Vec<f64>| {
        let map = &maps[k];
        let mut w = vec![0.0; map.svec_dim()];
        map.gather_into(gather_from, &mut w);
        for (t, wt) in w.iter_mut().enumerate() {
            *wt += shift_sign * multipliers[k][t];
        }
        let p = project_unchecked(svec_to_mat(map.size, &w));
        mat_to_svec(&p, slot);
    };
    if maps.len() >= PAR_THRESHOLD {
        out.par_iter_mut().enumerate().for_each(|(k, slot)| one(k, slot));
    } else {
        for (k, slot) in out.iter_mut().enumerate() {
            one(k, slot);
        }
    }
}

/// Range-mode variant: projects `v_k - λ_k` where `v` is given per clique.
fn project_slices(
    maps: &[CliqueMap],
    v: &[Vec<f64>],
    multipliers: &[Vec<f64>],
    out: &mut [Vec<f64>],
) {
    let one = |k: usize, slot: &mut Vec<f64>| {
        let map = &maps[k];
        let mut w = v[k].clone();
        for (t, wt) in w.iter_mut().enumerate() {
            *wt -= multipliers[k][t];
        }
        let p = project_unchecked(svec_to_mat(map.size, &w));
        mat_to_svec(&p, slot);
    };
    if maps.len() >= PAR_THRESHOLD {
        out.par_iter_mut().enumerate().for_each(|(k, slot)| one(k, slot));
    } else {
        for (k, slot) in out.iter_mut().enumerate() {
            one(k, slot);
        }
    }
}

fn log_row(
    log: &mut Option<&mut dyn Write>,
    iter: usize,
    pr: f64,
    dr: f64,
    obj: f64,
    rho: f64,
) -> Result<(), Error> {
    if let Some(w) = log {
        writeln!(w, "{iter},{pr:?},{dr:?},{obj:?},{rho:?}")?;
    }
    Ok(())
}

fn log_header(log: &mut Option<&mut dyn Write>) -> Result<(), Error> {
    if let Some(w) = log {
        writeln!(w, "iter,primal_res,dual_res,objective,rho")?;
    }
    Ok(())
}

pub fn solve_domain(d: &DecomposedSdp, s: &AdmmSettings) -> Result<Solution, Error> {
    run_domain(d, s, None)
}

/// Domain solve writing a CSV iteration log
/// (`iter,primal_res,dual_res,objective,rho`, one row per residual check).
pub fn solve_domain_with_log<W: Write>(
    d: &DecomposedSdp,
    s: &AdmmSettings,
    log: &mut W,
) -> Result<Solution, Error> {
    run_domain(d, s, Some(log))
}

pub fn solve_range(d: &DecomposedSdp, s: &AdmmSettings) -> Result<Solution, Error> {
    run_range(d, s, None)
}

pub fn solve_range_with_log<W: Write>(
    d: &DecomposedSdp,
    s: &AdmmSettings,
    log: &mut W,
) -> Result<Solution, Error> {
    run_range(d, s, Some(log))
}

fn run_domain(
    d: &DecomposedSdp,
    s: &AdmmSettings,
    mut log: Option<&mut dyn Write>,
) -> Result<Solution, Error> {
    if d.mode() != Mode::Domain {
        return Err(Error::WrongMode { expected: Mode::Domain, found: d.mode() });
    }
    s.validate()?;
    let ws = Workspace::new(d)?;
    let dim = ws.dim();
    let m = ws.b.len();
    let t = ws.maps.len();
    let mut st = AdmmState::new(&ws.maps, dim, m, Mode::Domain);
    let mut rho = s.rho;

    let mut r = vec![0.0; dim];
    let mut atmu = vec![0.0; dim];
    let mut rhs = vec![0.0; m];
    let mut next = st.clique_vars.clone();
    let mut sbuf = vec![0.0; dim];

    let mut primal_res = f64::INFINITY;
    let mut dual_res = f64::INFINITY;
    let mut status = Status::MaxIter;
    log_header(&mut log)?;

    while st.iter < s.max_iter {
        st.iter += 1;

        // Quadratic step: minimize ⟨C,X⟩ + (ρ/2) Σ‖X_k − E XEᵀ + Λ_k‖²
        // subject to A x = b, eliminating x through the diagonal Hessian ρD.
        r.iter_mut().for_each(|v| *v = 0.0);
        for k in 0..t {
            for (tl, &g) in ws.maps[k].gather.iter().enumerate() {
                r[g] += st.clique_vars[k][tl] + st.multipliers[k][tl];
            }
        }
        atmu.iter_mut().for_each(|v| *v = 0.0);
        if m > 0 {
            for (i, a) in ws.avecs.iter().enumerate() {
                let mut acc = 0.0;
                for &(g, v) in a {
                    acc += v * ws.dinv[g] * (r[g] - ws.cfull[g] / rho);
                }
                rhs[i] = rho * (acc - ws.b[i]);
            }
            let mu = ws.kkt.solve(&rhs);
            for (i, a) in ws.avecs.iter().enumerate() {
                for &(g, v) in a {
                    atmu[g] += v * mu[i];
                }
            }
        }
        for g in 0..dim {
            st.x[g] = ws.dinv[g] * (r[g] - (ws.cfull[g] + atmu[g]) / rho);
        }

        // Conic step: X_k = P(E XEᵀ − Λ_k) per clique.
        project_cliques(&ws.maps, &st.x, &st.multipliers, -1.0, &mut next);

        let check = st.iter % s.check_every == 0 || st.iter == s.max_iter;
        if check {
            sbuf.iter_mut().for_each(|v| *v = 0.0);
            for k in 0..t {
                for (tl, &g) in ws.maps[k].gather.iter().enumerate() {
                    sbuf[g] += next[k][tl] - st.clique_vars[k][tl];
                }
            }
            dual_res = rho * norm(&sbuf);
        }

        // Multipliers track the consistency gap: Λ_k += X_k − E XEᵀ.
        for k in 0..t {
            for (tl, &g) in ws.maps[k].gather.iter().enumerate() {
                st.multipliers[k][tl] += next[k][tl] - st.x[g];
            }
        }
        std::mem::swap(&mut st.clique_vars, &mut next);

        if !check {
            continue;
        }

        let xnorm = norm(&st.x);
        let mut gap2 = 0.0;
        let mut cliques_ok = true;
        for k in 0..t {
            let map = &ws.maps[k];
            let mut local2 = 0.0;
            let mut knorm2 = 0.0;
            for (tl, &g) in map.gather.iter().enumerate() {
                let diff = st.clique_vars[k][tl] - st.x[g];
                local2 += diff * diff;
                knorm2 += st.clique_vars[k][tl] * st.clique_vars[k][tl];
            }
            gap2 += local2;
            let bound = s.eps_abs * (map.size as f64).sqrt()
                + s.eps_rel * knorm2.sqrt().max(xnorm);
            if local2.sqrt() > bound {
                cliques_ok = false;
            }
        }
        primal_res = gap2.sqrt();

        let mut feas_ok = true;
        for (i, a) in ws.avecs.iter().enumerate() {
            let ax: f64 = a.iter().map(|&(g, v)| v * st.x[g]).sum();
            if (ax - ws.b[i]).abs() > s.eps_abs + s.eps_rel * ax.abs().max(ws.b[i].abs()) {
                feas_ok = false;
                break;
            }
        }

        sbuf.iter_mut().for_each(|v| *v = 0.0);
        for k in 0..t {
            for (tl, &g) in ws.maps[k].gather.iter().enumerate() {
                sbuf[g] += st.multipliers[k][tl];
            }
        }
        let dual_scale = rho * norm(&sbuf);
        let dual_ok = dual_res <= s.eps_abs * (dim as f64).sqrt() + s.eps_rel * dual_scale;

        let objective: f64 = ws.cfull.iter().zip(&st.x).map(|(c, x)| c * x).sum();
        log_row(&mut log, st.iter, primal_res, dual_res, objective, rho)?;

        if cliques_ok && feas_ok && dual_ok {
            status = Status::Solved;
            break;
        }
        if s.adaptive_rho {
            if primal_res > 10.0 * dual_res {
                rho *= 2.0;
                st.multipliers.iter_mut().flatten().for_each(|v| *v *= 0.5);
            } else if dual_res > 10.0 * primal_res {
                rho *= 0.5;
                st.multipliers.iter_mut().flatten().for_each(|v| *v *= 2.0);
            }
        }
    }

    let objective: f64 = ws.cfull.iter().zip(&st.x).map(|(c, x)| c * x).sum();
    let xmat = ws.layout.to_matrix(&st.x);
    let x_completed = if status == Status::Solved {
        let feas_tol = 100.0 * s.eps_abs * (1.0 + xmat.max_abs());
        max_det_complete_with_tolerance(&xmat, d.tree(), None, feas_tol).ok()
    } else {
        None
    };
    Ok(Solution {
        objective,
        x: Some(xmat),
        x_completed,
        y: None,
        primal_res,
        dual_res,
        status,
        iterations: st.iter,
    })
}

fn run_range(
    d: &DecomposedSdp,
    s: &AdmmSettings,
    mut log: Option<&mut dyn Write>,
) -> Result<Solution, Error> {
    if d.mode() != Mode::Range {
        return Err(Error::WrongMode { expected: Mode::Range, found: d.mode() });
    }
    s.validate()?;
    let ws = Workspace::new(d)?;
    let dim = ws.dim();
    let m = ws.b.len();
    let t = ws.maps.len();
    let mut st = AdmmState::new(&ws.maps, dim, m, Mode::Range);
    let mut rho = s.rho;

    let mut r = vec![0.0; dim];
    let mut aty = vec![0.0; dim];
    let mut mu = vec![0.0; dim];
    let mut rhs = vec![0.0; m];
    let mut next = st.clique_vars.clone();
    let mut sbuf = vec![0.0; dim];

    let mut primal_res = f64::INFINITY;
    let mut dual_res = f64::INFINITY;
    let mut status = Status::MaxIter;
    log_header(&mut log)?;

    while st.iter < s.max_iter {
        st.iter += 1;

        // Affine step: minimize −bᵀy + (ρ/2) Σ‖Z_k − V_k + Λ_k‖² over
        // (y, V) subject to C − A*(y) = Σ E_kᵀ V_k E_k.
        r.iter_mut().for_each(|v| *v = 0.0);
        for k in 0..t {
            for (tl, &g) in ws.maps[k].gather.iter().enumerate() {
                r[g] += st.clique_vars[k][tl] + st.multipliers[k][tl];
            }
        }
        aty.iter_mut().for_each(|v| *v = 0.0);
        if m > 0 {
            for (i, a) in ws.avecs.iter().enumerate() {
                let mut acc = 0.0;
                for &(g, v) in a {
                    acc += v * ws.dinv[g] * (ws.cfull[g] - r[g]);
                }
                rhs[i] = ws.b[i] / rho + acc;
            }
            st.y = ws.kkt.solve(&rhs);
            for (i, a) in ws.avecs.iter().enumerate() {
                for &(g, v) in a {
                    aty[g] += v * st.y[i];
                }
            }
        }
        for g in 0..dim {
            mu[g] = rho * ws.dinv[g] * (ws.cfull[g] - aty[g] - r[g]);
        }
        for k in 0..t {
            for (tl, &g) in ws.maps[k].gather.iter().enumerate() {
                st.v[k][tl] =
                    st.clique_vars[k][tl] + st.multipliers[k][tl] + mu[g] / rho;
            }
        }

        // Conic step: Z_k = P(V_k − Λ_k) per clique.
        project_slices(&ws.maps, &st.v, &st.multipliers, &mut next);

        let check = st.iter % s.check_every == 0 || st.iter == s.max_iter;
        if check {
            sbuf.iter_mut().for_each(|v| *v = 0.0);
            for k in 0..t {
                for (tl, &g) in ws.maps[k].gather.iter().enumerate() {
                    sbuf[g] += next[k][tl] - st.clique_vars[k][tl];
                }
            }
            dual_res = rho * norm(&sbuf);
        }

        // Λ_k += Z_k − V_k.
        for k in 0..t {
            for (tl, wt) in st.multipliers[k].iter_mut().enumerate() {
                *wt += next[k][tl] - st.v[k][tl];
            }
        }
        std::mem::swap(&mut st.clique_vars, &mut next);

        if !check {
            continue;
        }

        let mut gap2 = 0.0;
        let mut cliques_ok = true;
        for k in 0..t {
            let map = &ws.maps[k];
            let mut local2 = 0.0;
            let mut zn2 = 0.0;
            let mut vn2 = 0.0;
            for tl in 0..map.svec_dim() {
                let diff = st.clique_vars[k][tl] - st.v[k][tl];
                local2 += diff * diff;
                zn2 += st.clique_vars[k][tl] * st.clique_vars[k][tl];
                vn2 += st.v[k][tl] * st.v[k][tl];
            }
            gap2 += local2;
            let bound = s.eps_abs * (map.size as f64).sqrt()
                + s.eps_rel * zn2.max(vn2).sqrt();
            if local2.sqrt() > bound {
                cliques_ok = false;
            }
        }
        primal_res = gap2.sqrt();

        sbuf.iter_mut().for_each(|v| *v = 0.0);
        for k in 0..t {
            for (tl, &g) in ws.maps[k].gather.iter().enumerate() {
                sbuf[g] += st.multipliers[k][tl];
            }
        }
        let dual_scale = rho * norm(&sbuf);
        let dual_ok = dual_res <= s.eps_abs * (dim as f64).sqrt() + s.eps_rel * dual_scale;

        let objective: f64 = ws.b.iter().zip(&st.y).map(|(b, y)| b * y).sum();
        log_row(&mut log, st.iter, primal_res, dual_res, objective, rho)?;

        if cliques_ok && dual_ok {
            status = Status::Solved;
            break;
        }
        if s.adaptive_rho {
            if primal_res > 10.0 * dual_res {
                rho *= 2.0;
                st.multipliers.iter_mut().flatten().for_each(|v| *v *= 0.5);
            } else if dual_res > 10.0 * primal_res {
                rho *= 0.5;
                st.multipliers.iter_mut().flatten().for_each(|v| *v *= 2.0);
            }
        }
    }

    let objective: f64 = ws.b.iter().zip(&st.y).map(|(b, y)| b * y).sum();
    Ok(Solution {
        objective,
        x: None,
        x_completed: None,
        y: Some(st.y),
        primal_res,
        dual_res,
        status,
        iterations: st.iter,
    })
}
