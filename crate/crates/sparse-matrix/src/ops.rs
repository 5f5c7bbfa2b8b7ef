use crate::{Error, SparseSymMatrix, SparsityPattern};
use nalgebra::DMatrix;

/// Keeps the entries of `dense` lying on `pattern` (diagonal always) and
/// drops the rest. Symmetrizes by averaging mirrored entries.
pub fn project_pattern(dense: &DMatrix<f64>, pattern: &SparsityPattern) -> Result<SparseSymMatrix, Error> {
    if dense.nrows() != pattern.n() || dense.ncols() != pattern.n() {
        return Err(Error::DimensionMismatch { expected: pattern.n(), found: dense.nrows() });
    }
    let mut out = SparseSymMatrix::zeros(pattern.clone());
    for i in 0..pattern.n() {
        out.set(i, i, dense[(i, i)]).expect("diagonal is always on the pattern");
    }
    for &(i, j) in pattern.edges() {
        out.set(i, j, 0.5 * (dense[(i, j)] + dense[(j, i)])).expect("pattern edge");
    }
    Ok(out)
}

/// Dense principal submatrix `X[c, c]` with rows and columns in the
/// sorted clique order. Off-pattern positions read as zero.
pub fn extract(x: &SparseSymMatrix, clique: &[usize]) -> DMatrix<f64> {
    let s = clique.len();
    let mut m = DMatrix::zeros(s, s);
    for (a, &i) in clique.iter().enumerate() {
        for (b, &j) in clique.iter().enumerate().skip(a) {
            let v = x.get(i, j);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    m
}

/// Places a dense `|c| x |c|` block onto the clique positions of an
/// `n x n` sparse matrix: the adjoint of [`extract`].
pub fn inflate(y: &DMatrix<f64>, clique: &[usize], n: usize) -> Result<SparseSymMatrix, Error> {
    let s = clique.len();
    if y.nrows() != s || y.ncols() != s {
        return Err(Error::DimensionMismatch { expected: s, found: y.nrows() });
    }
    let cs = chordal_graph::CliqueSet::new(n, vec![clique.to_vec()])?;
    let mut out = SparseSymMatrix::zeros(SparsityPattern::from_cliques(&cs));
    for (a, &i) in clique.iter().enumerate() {
        for (b, &j) in clique.iter().enumerate().skip(a) {
            out.set(i, j, 0.5 * (y[(a, b)] + y[(b, a)])).expect("clique entry");
        }
    }
    Ok(out)
}

/// Adds `y` on clique positions into an existing accumulator.
pub fn add_inflated(acc: &mut SparseSymMatrix, y: &DMatrix<f64>, clique: &[usize]) -> Result<(), Error> {
    let s = clique.len();
    if y.nrows() != s || y.ncols() != s {
        return Err(Error::DimensionMismatch { expected: s, found: y.nrows() });
    }
    for (a, &i) in clique.iter().enumerate() {
        for (b, &j) in clique.iter().enumerate().skip(a) {
            acc.add_to(i, j, 0.5 * (y[(a, b)] + y[(b, a)]))?;
        }
    }
    Ok(())
}

/// Smallest eigenvalue of a symmetric dense matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let sym = nalgebra::SymmetricEigen::new(m.clone());
    sym.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Acceptance threshold for "numerically positive semidefinite":
/// eigenvalues above `-1e-8 * max(1, scale)` pass, where `scale` is the
/// largest entry magnitude.
pub fn psd_tolerance(scale: f64) -> f64 {
    1e-8 * scale.max(1.0)
}
