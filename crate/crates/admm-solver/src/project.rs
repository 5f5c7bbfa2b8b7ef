use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::Error;

/// Nearest positive semidefinite matrix in Frobenius norm: negative
/// eigenvalues are clipped to zero.
pub fn psd_project(m: &DMatrix<f64>) -> Result<DMatrix<f64>, Error> {
    let mut max_dev: f64 = 0.0;
    let scale = m.amax().max(1.0);
    for i in 0..m.nrows() {
        for j in i + 1..m.ncols() {
            max_dev = max_dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if m.nrows() != m.ncols() || max_dev > 1e-8 * scale {
        return Err(Error::NotSymmetric { max_dev });
    }
    Ok(project_unchecked(m.clone()))
}

/// Projection without the symmetry check, for iterates that are
/// symmetric by construction.
pub(crate) fn project_unchecked(m: DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut out = DMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        for i in 0..n {
            let s = lambda * v[i];
            for j in i..n {
                out[(i, j)] += s * v[j];
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            out[(j, i)] = out[(i, j)];
        }
    }
    out
}
