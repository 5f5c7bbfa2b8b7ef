use crate::{Error, SparsityPattern};
use nalgebra::DMatrix;

/// Symmetric matrix stored on a [`SparsityPattern`]: one value per
/// upper-triangular pattern entry, diagonal included. Off-pattern
/// positions read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    pattern: SparsityPattern,
    /// Canonical entry coordinates, `pattern.entry_list()`.
    entries: Vec<(usize, usize)>,
    vals: Vec<f64>,
}

impl SparseSymMatrix {
    pub fn zeros(pattern: SparsityPattern) -> Self {
        let entries = pattern.entry_list();
        let vals = vec![0.0; entries.len()];
        SparseSymMatrix { pattern, entries, vals }
    }

    /// Builds a matrix from `(i, j, value)` triples; the pattern is the
    /// set of mentioned off-diagonal positions. Duplicate positions are
    /// rejected.
    pub fn from_triples(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self, Error> {
        let edges: Vec<(usize, usize)> =
            triples.iter().filter(|t| t.0 != t.1).map(|t| (t.0, t.1)).collect();
        let pattern = SparsityPattern::from_edges(n, &edges)?;
        if pattern.edge_count() != edges.len() {
            return Err(Error::Parse { line: 0, msg: "duplicate off-diagonal entry".into() });
        }
        let mut m = SparseSymMatrix::zeros(pattern);
        let mut seen_diag = vec![false; n];
        for &(i, j, v) in triples {
            if i == j {
                if seen_diag[i] {
                    return Err(Error::Parse { line: 0, msg: format!("duplicate diagonal entry {i}") });
                }
                seen_diag[i] = true;
            }
            m.set(i, j, v)?;
        }
        Ok(m)
    }

    pub fn pattern(&self) -> &SparsityPattern {
        &self.pattern
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.entries.binary_search(&key).ok()
    }

    /// Entry read; off-pattern positions are zero.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.index_of(i, j).map_or(0.0, |k| self.vals[k])
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<(), Error> {
        match self.index_of(i, j) {
            Some(k) => {
                self.vals[k] = v;
                Ok(())
            }
            None => Err(Error::EntryOutsidePattern { i, j }),
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) -> Result<(), Error> {
        match self.index_of(i, j) {
            Some(k) => {
                self.vals[k] += v;
                Ok(())
            }
            None => Err(Error::EntryOutsidePattern { i, j }),
        }
    }

    /// Upper-triangular entries `(i, j, value)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().zip(self.vals.iter()).map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.vals
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (i, j, v) in self.entries() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }

    /// Frobenius norm of the full symmetric matrix.
    pub fn norm_fro(&self) -> f64 {
        let mut acc = 0.0;
        for (i, j, v) in self.entries() {
            acc += if i == j { v * v } else { 2.0 * v * v };
        }
        acc.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |a: f64, &v| a.max(v.abs()))
    }

    /// `<A, B>` = trace(A B); patterns may differ, the sum runs over the
    /// intersection.
    pub fn inner(&self, other: &SparseSymMatrix) -> f64 {
        debug_assert_eq!(self.n(), other.n());
        // Iterate over the smaller entry list.
        let (small, big) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = 0.0;
        for (i, j, v) in small.entries() {
            if v == 0.0 {
                continue;
            }
            let w = big.get(i, j);
            acc += if i == j { v * w } else { 2.0 * v * w };
        }
        acc
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.vals {
            *v *= s;
        }
    }

    /// Parses the text form: `"n nnz"` header, then `nnz` lines
    /// `"i j value"` with 1-based indices and `i <= j`. Blank lines and
    /// `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) =
            lines.next().ok_or(Error::Parse { line: 1, msg: "missing \"n nnz\" header".into() })?;
        let mut it = header.split_whitespace();
        let n: usize = field(it.next(), line_no, "dimension")?;
        let nnz: usize = field(it.next(), line_no, "entry count")?;

        let mut triples = Vec::new();
        for (line_no, line) in lines {
            let mut it = line.split_whitespace();
            let i: usize = field(it.next(), line_no, "row index")?;
            let j: usize = field(it.next(), line_no, "column index")?;
            let v: f64 = field(it.next(), line_no, "value")?;
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::Parse { line: line_no, msg: format!("index out of range: {i} {j}") });
            }
            if i > j {
                return Err(Error::Parse { line: line_no, msg: "entries must satisfy i <= j".into() });
            }
            triples.push((i - 1, j - 1, v));
        }
        if triples.len() != nnz {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {} entries, found {}", nnz, triples.len()),
            });
        }
        Self::from_triples(n, &triples)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.entries.len());
        for (i, j, v) in self.entries() {
            out.push_str(&format!("{} {} {:?}\n", i + 1, j + 1, v));
        }
        out
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, Error> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("invalid {what}: {tok:?}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn get_set_and_symmetry() {
        let p = SparsityPattern::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut m = SparseSymMatrix::zeros(p);
        m.set(1, 0, 5.0).unwrap();
        assert_eq!(m.get(0, 1), 5.0);
        assert_eq!(m.get(0, 2), 0.0);
        assert!(m.set(0, 2, 1.0).is_err());
    }

    #[test]
    fn inner_product_counts_off_diagonals_twice() {
        let a = SparseSymMatrix::from_triples(2, &[(0, 0, 1.0), (0, 1, 2.0), (1, 1, 3.0)]).unwrap();
        let b = SparseSymMatrix::from_triples(2, &[(0, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(a.inner(&b), 1.0 + 2.0 * 2.0);
        let dense_a = a.to_dense();
        let dense_b = b.to_dense();
        assert_eq!((dense_a * dense_b).trace(), a.inner(&b));
    }

    #[test]
    fn norms_match_dense() {
        let m = SparseSymMatrix::from_triples(3, &[(0, 0, 2.0), (0, 1, -1.0), (2, 2, 4.0)]).unwrap();
        assert!((m.norm_fro() - m.to_dense().norm()).abs() < 1e-14);
        assert_eq!(m.max_abs(), 4.0);
    }

    #[test]
    fn text_round_trip() {
        let text = "3 4\n1 1 2.0\n1 2 1.0\n2 2 1.0\n2 3 -0.5\n";
        let m = SparseSymMatrix::parse(text).unwrap();
        assert_eq!(m.get(1, 2), -0.5);
        let again = SparseSymMatrix::parse(&m.to_text()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn parse_rejects_lower_triangle() {
        assert!(SparseSymMatrix::parse("2 1\n2 1 1.0\n").is_err());
    }

    #[test]
    fn duplicate_entries_rejected() {
        assert!(SparseSymMatrix::from_triples(2, &[(0, 1, 1.0), (0, 1, 2.0)]).is_err());
        assert!(SparseSymMatrix::from_triples(2, &[(0, 0, 1.0), (0, 0, 2.0)]).is_err());
    }
}
