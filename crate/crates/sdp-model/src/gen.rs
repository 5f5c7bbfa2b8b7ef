use crate::{Error, SdpProblem};
use chordal_graph::{Graph, Partition};
use nalgebra::DMatrix;
use rand::Rng;
use sparse_matrix::SparseSymMatrix;

/// Max-Cut SDP relaxation on the elliptope:
/// `min <W, Z>  s.t.  Z_ii = 1, Z PSD`.
pub fn gen_maxcut(w: &DMatrix<f64>) -> Result<SdpProblem, Error> {
    let n = w.nrows();
    if w.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: w.ncols() });
    }
    let mut triples = Vec::new();
    for i in 0..n {
        if w[(i, i)] != 0.0 {
            return Err(Error::Invalid(format!("nonzero diagonal weight at {}", i + 1)));
        }
        for j in i + 1..n {
            if w[(i, j)] != w[(j, i)] {
                return Err(Error::Invalid(format!(
                    "asymmetric weights at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if w[(i, j)] != 0.0 {
                triples.push((i, j, w[(i, j)]));
            }
        }
    }
    let c = SparseSymMatrix::from_triples(n, &triples)?;
    let mut a = Vec::with_capacity(n);
    for i in 0..n {
        a.push(SparseSymMatrix::from_triples(n, &[(i, i, 1.0)])?);
    }
    SdpProblem::new(c, a, vec![1.0; n], Some(vec![n as i64]))
}

/// Margin used to turn the strict Lyapunov LMIs into non-strict ones.
pub const LYAPUNOV_MARGIN: f64 = 1e-6;

/// Feasibility SDP for a block-diagonal Lyapunov certificate of a
/// networked linear system `dx = A x`:
///
/// ```text
/// find P = diag(P_1, ..., P_l)  s.t.  P >= eps*I,  -(A'P + PA) >= eps*I
/// ```
///
/// encoded in dual standard form with one scalar variable per entry of
/// the `P` blocks and a 2n x 2n slack cone split as `[n, n]`. The block
/// sparsity of the second LMI equals the network graph, so decomposition
/// operates clique-wise on the network.
pub fn gen_lyapunov(a: &DMatrix<f64>, network: &Graph, sizes: &Partition) -> Result<SdpProblem, Error> {
    let n = sizes.total();
    let l = sizes.len();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.nrows() });
    }
    if network.n() != l {
        return Err(Error::DimensionMismatch { expected: l, found: network.n() });
    }
    for bi in 0..l {
        for bj in 0..l {
            if bi == bj || network.has_edge(bi, bj) {
                continue;
            }
            for i in sizes.range(bi) {
                for j in sizes.range(bj) {
                    if a[(i, j)] != 0.0 {
                        return Err(Error::Invalid(format!(
                            "system block ({}, {}) is off the network",
                            bi + 1,
                            bj + 1
                        )));
                    }
                }
            }
        }
    }

    let eps = LYAPUNOV_MARGIN;
    let mut c_triples = Vec::with_capacity(2 * n);
    for i in 0..2 * n {
        c_triples.push((i, i, -eps));
    }
    let c = SparseSymMatrix::from_triples(2 * n, &c_triples)?;

    // One variable per upper-triangular entry of each P block; the slack
    // is diag(P, -(A'P + PA)) - eps*I, so A_var = diag(-B, A'B + BA).
    let mut a_mats = Vec::new();
    for blk in 0..l {
        let range = sizes.range(blk);
        for r in range.clone() {
            for cidx in r..range.end {
                let mut basis = DMatrix::zeros(n, n);
                basis[(r, cidx)] = 1.0;
                basis[(cidx, r)] = 1.0;
                let lyap = a.transpose() * &basis + &basis * a;
                let mut triples = vec![(r, cidx, -1.0)];
                for i in 0..n {
                    for j in i..n {
                        if lyap[(i, j)] != 0.0 {
                            triples.push((n + i, n + j, lyap[(i, j)]));
                        }
                    }
                }
                a_mats.push(SparseSymMatrix::from_triples(2 * n, &triples)?);
            }
        }
    }
    let m = a_mats.len();
    SdpProblem::new(c, a_mats, vec![0.0; m], Some(vec![n as i64, n as i64]))
}

/// Random networked system matrix supported on the graph: a network-sparse
/// skew part plus a block-diagonal definite part. With `stable`, the
/// definite part is subtracted, so `A' + A = -2D` and `P = I` certifies
/// stability; otherwise it is added and no Lyapunov certificate exists.
pub fn random_network_system<R: Rng>(
    network: &Graph,
    sizes: &Partition,
    stable: bool,
    rng: &mut R,
) -> DMatrix<f64> {
    let n = sizes.total();
    let mut a = DMatrix::zeros(n, n);
    for &(bi, bj) in &network.edges() {
        let ri = sizes.range(bi);
        let rj = sizes.range(bj);
        for i in ri.clone() {
            for j in rj.clone() {
                let v = rng.gen_range(-1.0..1.0);
                a[(i, j)] = v;
                a[(j, i)] = -v;
            }
        }
    }
    let sign = if stable { -1.0 } else { 1.0 };
    for blk in 0..sizes.len() {
        let r = sizes.range(blk);
        let s = r.len();
        let mut g = DMatrix::zeros(s, s);
        for i in 0..s {
            for j in 0..s {
                g[(i, j)] = rng.gen_range(-1.0..1.0);
            }
        }
        let mut k = DMatrix::zeros(s, s);
        for i in 0..s {
            for j in 0..s {
                k[(i, j)] = rng.gen_range(-1.0..1.0);
            }
        }
        let skew = (&k - k.transpose()) * 0.5;
        let spd = &g * g.transpose() / s as f64 + DMatrix::identity(s, s) * 0.5;
        for i in 0..s {
            for j in 0..s {
                a[(r.start + i, r.start + j)] = skew[(i, j)] + sign * spd[(i, j)];
            }
        }
    }
    a
}
