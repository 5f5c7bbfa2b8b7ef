use crate::Error;
use sparse_matrix::SparseSymMatrix;

/// Standard-form SDP data:
///
/// ```text
/// primal:  min <C, X>   s.t.  <A_i, X> = b_i,  X PSD
/// dual:    max b'y      s.t.  C - sum_i y_i A_i PSD
/// ```
///
/// An optional block structure records that the cone is a product of
/// smaller PSD cones; a negative size denotes a diagonal block, as in the
/// SDPA convention. Linear independence of the `A_i` is not assumed.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    n: usize,
    c: SparseSymMatrix,
    a: Vec<SparseSymMatrix>,
    b: Vec<f64>,
    block_structure: Option<Vec<i64>>,
}

impl SdpProblem {
    pub fn new(
        c: SparseSymMatrix,
        a: Vec<SparseSymMatrix>,
        b: Vec<f64>,
        block_structure: Option<Vec<i64>>,
    ) -> Result<Self, Error> {
        let n = c.n();
        for ai in &a {
            if ai.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: ai.n() });
            }
        }
        if b.len() != a.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        if let Some(blocks) = &block_structure {
            if blocks.iter().any(|&s| s == 0) {
                return Err(Error::Invalid("zero-sized block".to_string()));
            }
            let total: i64 = blocks.iter().map(|s| s.abs()).sum();
            if total != n as i64 {
                return Err(Error::DimensionMismatch { expected: n, found: total as usize });
            }
        }
        Ok(SdpProblem { n, c, a, b, block_structure })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of equality constraints.
    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn c(&self) -> &SparseSymMatrix {
        &self.c
    }

    pub fn a(&self) -> &[SparseSymMatrix] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn block_structure(&self) -> Option<&[i64]> {
        self.block_structure.as_deref()
    }

    /// Starting column of each block, when a block structure is present.
    pub fn block_offsets(&self) -> Option<Vec<usize>> {
        self.block_structure.as_ref().map(|blocks| {
            let mut off = Vec::with_capacity(blocks.len());
            let mut acc = 0usize;
            for &s in blocks {
                off.push(acc);
                acc += s.unsigned_abs() as usize;
            }
            off
        })
    }
}
