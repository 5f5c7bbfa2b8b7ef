use crate::{Error, SdpProblem};
use nalgebra::{DMatrix, DVector};
use sparse_matrix::SparseSymMatrix;

/// Quadratic function `x' P x + q' x + r`.
#[derive(Debug, Clone)]
pub struct QuadForm {
    pub p: DMatrix<f64>,
    pub q: DVector<f64>,
    pub r: f64,
}

impl QuadForm {
    pub fn new(p: DMatrix<f64>, q: DVector<f64>, r: f64) -> Result<Self, Error> {
        if p.nrows() != p.ncols() {
            return Err(Error::DimensionMismatch { expected: p.nrows(), found: p.ncols() });
        }
        if q.len() != p.nrows() {
            return Err(Error::DimensionMismatch { expected: p.nrows(), found: q.len() });
        }
        Ok(QuadForm { p, q, r })
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        (x.transpose() * &self.p * x)[(0, 0)] + self.q.dot(x) + self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `g(x) = 0`
    Equality,
    /// `g(x) <= 0`
    Inequality,
}

/// Nonconvex quadratic program `min g_0(x)` over quadratic equalities and
/// inequalities.
#[derive(Debug, Clone)]
pub struct Qcqp {
    n: usize,
    objective: QuadForm,
    constraints: Vec<(QuadForm, ConstraintKind)>,
}

impl Qcqp {
    pub fn new(
        objective: QuadForm,
        constraints: Vec<(QuadForm, ConstraintKind)>,
    ) -> Result<Self, Error> {
        let n = objective.p.nrows();
        for (g, _) in &constraints {
            if g.p.nrows() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.p.nrows() });
            }
        }
        Ok(Qcqp { n, objective, constraints })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn objective(&self) -> &QuadForm {
        &self.objective
    }

    pub fn constraints(&self) -> &[(QuadForm, ConstraintKind)] {
        &self.constraints
    }
}

/// Shor relaxation: lifts `x` to `Z = [[1, x'], [x, xx']]` and relaxes the
/// rank-one condition to `Z` PSD with `Z_11 = 1`.
///
/// Every quadratic constraint becomes a linear row in `Z`; inequalities
/// get a nonnegative slack placed in a diagonal block after the lifted
/// cone. The optimum lower-bounds the QCQP.
pub fn qcqp_relax(q: &Qcqp) -> Result<SdpProblem, Error> {
    let n = q.n();
    let slacks = q
        .constraints
        .iter()
        .filter(|(_, kind)| *kind == ConstraintKind::Inequality)
        .count();
    let big_n = n + 1 + slacks;

    // Lifted coefficient matrix of a quadratic form, at global offset 0.
    let lift = |g: &QuadForm| -> Vec<(usize, usize, f64)> {
        let mut t = Vec::new();
        if g.r != 0.0 {
            t.push((0, 0, g.r));
        }
        for i in 0..n {
            if g.q[i] != 0.0 {
                t.push((0, i + 1, g.q[i] / 2.0));
            }
        }
        for i in 0..n {
            for j in i..n {
                let v = (g.p[(i, j)] + g.p[(j, i)]) / 2.0;
                if v != 0.0 {
                    t.push((i + 1, j + 1, v));
                }
            }
        }
        t
    };

    let c = SparseSymMatrix::from_triples(big_n, &lift(&q.objective))?;
    let mut a = Vec::with_capacity(1 + q.constraints.len());
    let mut b = Vec::with_capacity(1 + q.constraints.len());
    a.push(SparseSymMatrix::from_triples(big_n, &[(0, 0, 1.0)])?);
    b.push(1.0);
    let mut slack = n + 1;
    for (g, kind) in &q.constraints {
        let mut t = lift(g);
        if *kind == ConstraintKind::Inequality {
            t.push((slack, slack, 1.0));
            slack += 1;
        }
        a.push(SparseSymMatrix::from_triples(big_n, &t)?);
        b.push(0.0);
    }

    let mut blocks = vec![(n + 1) as i64];
    if slacks > 0 {
        blocks.push(-(slacks as i64));
    }
    SdpProblem::new(c, a, b, Some(blocks))
}
