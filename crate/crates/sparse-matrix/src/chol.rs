use crate::{Error, SparseSymMatrix, SparsityPattern};
use chordal_graph::{peo_witness, Ordering};
use nalgebra::DMatrix;

/// Sparse Cholesky factor `P Z P^T = L L^T` computed along a perfect
/// elimination ordering, so `L + L^T` fills only the permuted pattern.
/// Columns are stored sparsely in permuted coordinates.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    perm: Ordering,
    pattern: SparsityPattern,
    /// Strictly-below-diagonal column entries `(row, value)` in permuted
    /// coordinates, rows ascending.
    cols: Vec<Vec<(usize, f64)>>,
    /// Diagonal pivots `L[k][k]`; exactly zero for semidefinite
    /// directions.
    diag: Vec<f64>,
}

impl CholeskyFactor {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// The elimination ordering the factor was computed along.
    pub fn ordering(&self) -> &Ordering {
        &self.perm
    }

    /// Pattern of the factored matrix (original coordinates).
    pub fn pattern(&self) -> &SparsityPattern {
        &self.pattern
    }

    /// Diagonal pivots in elimination order.
    pub fn pivots(&self) -> &[f64] {
        &self.diag
    }

    pub fn is_positive_definite(&self) -> bool {
        self.diag.iter().all(|&d| d > 0.0)
    }

    /// Column `k` of `L` in permuted coordinates, diagonal included.
    pub fn column(&self, k: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        std::iter::once((k, self.diag[k])).chain(self.cols[k].iter().copied())
    }

    /// Dense `L` in permuted coordinates.
    pub fn l_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut l = DMatrix::zeros(n, n);
        for k in 0..n {
            for (i, v) in self.column(k) {
                l[(i, k)] = v;
            }
        }
        l
    }

    /// Recomputes `P^T L L^T P` on the original pattern; for validation.
    pub fn reconstruct(&self) -> SparseSymMatrix {
        let mut out = SparseSymMatrix::zeros(self.pattern.clone());
        for k in 0..self.n() {
            let col: Vec<(usize, f64)> = self.column(k).collect();
            for (a, &(i, vi)) in col.iter().enumerate() {
                for &(j, vj) in &col[a..] {
                    let oi = self.perm.vertex_at(i);
                    let oj = self.perm.vertex_at(j);
                    out.add_to(oi.min(oj), oi.max(oj), vi * vj)
                        .expect("factor fill stays on the pattern");
                }
            }
        }
        out
    }

    /// Solves `Z x = rhs` through the factor; requires strict positive
    /// definiteness.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, Error> {
        let n = self.n();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
        }
        if let Some(k) = self.diag.iter().position(|&d| d <= 0.0) {
            return Err(Error::NotPositiveDefinite { pivot_index: k });
        }
        // Permute, L y = b, L^T x = y, unpermute.
        let mut y: Vec<f64> = (0..n).map(|k| rhs[self.perm.vertex_at(k)]).collect();
        for k in 0..n {
            y[k] /= self.diag[k];
            let yk = y[k];
            for &(i, v) in &self.cols[k] {
                y[i] -= v * yk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = y[k];
            for &(i, v) in &self.cols[k] {
                acc -= v * y[i];
            }
            y[k] = acc / self.diag[k];
        }
        let mut x = vec![0.0; n];
        for k in 0..n {
            x[self.perm.vertex_at(k)] = y[k];
        }
        Ok(x)
    }
}

/// Factors a numerically positive semidefinite matrix along a perfect
/// elimination ordering of its pattern with zero fill-in.
///
/// Pivots within `±1e-8 * max(1, |Z|_max)` of zero are treated as exact
/// zeros and their columns zeroed; pivots below the negative tolerance,
/// or zero pivots with a structurally nonzero column remainder, report
/// [`Error::NotPositiveSemidefinite`].
pub fn sparse_cholesky(z: &SparseSymMatrix, ord: &Ordering) -> Result<CholeskyFactor, Error> {
    let n = z.n();
    if let Some((vertex, missing)) = peo_witness(&z.pattern().to_graph(), ord)? {
        return Err(Error::Graph(chordal_graph::Error::NotPerfectOrdering { vertex, missing }));
    }

    let scale = z.max_abs().max(1.0);
    let piv_tol = 1e-8 * scale;
    let col_tol = 10.0 * piv_tol.sqrt() * scale.sqrt();

    // Working copy in permuted coordinates.
    let edges: Vec<(usize, usize)> = z
        .pattern()
        .edges()
        .iter()
        .map(|&(i, j)| (ord.position(i), ord.position(j)))
        .collect();
    let perm_pattern = SparsityPattern::from_edges(n, &edges)?;
    let mut work = SparseSymMatrix::zeros(perm_pattern);
    for (i, j, v) in z.entries() {
        work.set(ord.position(i), ord.position(j), v).expect("permuted entry");
    }
    // Permuted adjacency for column structure.
    let pg = work.pattern().to_graph();

    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut diag = vec![0.0; n];
    for k in 0..n {
        let d = work.get(k, k);
        let below: Vec<usize> = pg.neighbors(k).iter().copied().filter(|&i| i > k).collect();
        if d.abs() <= piv_tol {
            // Semidefinite direction: the whole column must vanish.
            for &i in &below {
                if work.get(i, k).abs() > col_tol {
                    return Err(Error::NotPositiveSemidefinite { pivot_index: k, pivot: d });
                }
            }
            diag[k] = 0.0;
            continue;
        }
        if d < 0.0 {
            return Err(Error::NotPositiveSemidefinite { pivot_index: k, pivot: d });
        }
        let lkk = d.sqrt();
        diag[k] = lkk;
        let mut col = Vec::with_capacity(below.len());
        for &i in &below {
            let v = work.get(i, k) / lkk;
            if v != 0.0 {
                col.push((i, v));
            }
        }
        // Right-looking update; the later neighborhood of `k` is a clique
        // of the permuted pattern, so every updated position exists.
        for (a, &(i, vi)) in col.iter().enumerate() {
            for &(j, vj) in &col[a..] {
                work.add_to(i.min(j), i.max(j), -vi * vj).expect("update stays on pattern");
            }
        }
        cols[k] = col;
    }

    Ok(CholeskyFactor { perm: ord.clone(), pattern: z.pattern().clone(), cols, diag })
}

/// Logarithmic barrier of the sparse positive definite cone evaluated
/// through a factor: `-log det Z = -2 * sum(log L_kk)`.
pub fn barrier_value(z: &SparseSymMatrix, fac: &CholeskyFactor) -> Result<f64, Error> {
    if fac.n() != z.n() {
        return Err(Error::DimensionMismatch { expected: z.n(), found: fac.n() });
    }
    let mut acc = 0.0;
    for (k, &d) in fac.pivots().iter().enumerate() {
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite { pivot_index: k });
        }
        acc += d.ln();
    }
    Ok(-2.0 * acc)
}

/// Projection of the dense inverse onto the pattern of `Z`; the gradient
/// of the sparse barrier is its negation.
pub fn projected_inverse(z: &SparseSymMatrix) -> Result<SparseSymMatrix, Error> {
    let n = z.n();
    let dense = z.to_dense();
    let chol = dense_cholesky(&dense)?;
    // Invert through triangular solves.
    let mut inv = DMatrix::zeros(n, n);
    for c in 0..n {
        let mut e = vec![0.0; n];
        e[c] = 1.0;
        for k in 0..n {
            e[k] /= chol[(k, k)];
            for i in k + 1..n {
                e[i] -= chol[(i, k)] * e[k];
            }
        }
        for k in (0..n).rev() {
            for i in k + 1..n {
                e[k] -= chol[(i, k)] * e[i];
            }
            e[k] /= chol[(k, k)];
        }
        for r in 0..n {
            inv[(r, c)] = e[r];
        }
    }
    crate::project_pattern(&inv, z.pattern())
}

/// Plain dense Cholesky that reports the failing pivot index.
pub(crate) fn dense_cholesky(m: &DMatrix<f64>) -> Result<DMatrix<f64>, Error> {
    let n = m.nrows();
    let mut l = m.lower_triangle();
    for k in 0..n {
        let mut d = l[(k, k)];
        for t in 0..k {
            d -= l[(k, t)] * l[(k, t)];
        }
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite { pivot_index: k });
        }
        let dk = d.sqrt();
        l[(k, k)] = dk;
        for i in k + 1..n {
            let mut v = l[(i, k)];
            for t in 0..k {
                v -= l[(i, t)] * l[(k, t)];
            }
            l[(i, k)] = v / dk;
        }
    }
    Ok(l)
}
