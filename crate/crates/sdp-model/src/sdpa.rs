use crate::{Error, SdpProblem};
use sparse_matrix::SparseSymMatrix;
use std::fmt::Write as _;
use std::path::Path;

/// Serializes to the SDPA sparse format (`.dat-s`).
///
/// The file encodes `min c'x  s.t.  sum_i x_i F_i - F_0 >= 0`; our dual
/// standard form maps onto it with `A_i = -F_i`, `C = -F_0`, `b = -c`, so
/// the file optimum is the negative of `max b'y`. Requires a block
/// structure covering the cone.
pub fn sdpa_write(p: &SdpProblem, path: &Path) -> Result<(), Error> {
    let text = sdpa_to_string(p)?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn sdpa_read(path: &Path) -> Result<SdpProblem, Error> {
    let text = std::fs::read_to_string(path)?;
    sdpa_from_str(&text)
}

pub fn sdpa_to_string(p: &SdpProblem) -> Result<String, Error> {
    let blocks = p
        .block_structure()
        .ok_or_else(|| Error::Invalid("SDPA output requires a block structure".to_string()))?;
    let offsets = p.block_offsets().expect("block structure present");
    let sizes: Vec<usize> = blocks.iter().map(|&s| s.unsigned_abs() as usize).collect();

    // Locates the block of a global entry; entries may not cross blocks,
    // and diagonal blocks admit only diagonal entries.
    let place = |i: usize, j: usize| -> Result<(usize, usize, usize), Error> {
        let b = match offsets.binary_search(&i) {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        if j >= offsets[b] + sizes[b] {
            return Err(Error::Invalid(format!("entry ({}, {}) crosses blocks", i + 1, j + 1)));
        }
        if blocks[b] < 0 && i != j {
            return Err(Error::Invalid(format!(
                "off-diagonal entry ({}, {}) in diagonal block {}",
                i + 1,
                j + 1,
                b + 1
            )));
        }
        Ok((b, i - offsets[b], j - offsets[b]))
    };

    let mut out = String::new();
    writeln!(out, "{}", p.m()).unwrap();
    writeln!(out, "{}", blocks.len()).unwrap();
    let size_line: Vec<String> = blocks.iter().map(|s| s.to_string()).collect();
    writeln!(out, "{}", size_line.join(" ")).unwrap();
    let c_line: Vec<String> = p.b().iter().map(|&v| format!("{:?}", -v)).collect();
    writeln!(out, "{}", c_line.join(" ")).unwrap();

    let write_matrix = |matno: usize, m: &SparseSymMatrix, out: &mut String| -> Result<(), Error> {
        for (i, j, v) in m.entries() {
            if v == 0.0 {
                continue;
            }
            let (b, li, lj) = place(i, j)?;
            writeln!(out, "{} {} {} {} {:?}", matno, b + 1, li + 1, lj + 1, -v).unwrap();
        }
        Ok(())
    };
    write_matrix(0, p.c(), &mut out)?;
    for (k, ai) in p.a().iter().enumerate() {
        write_matrix(k + 1, ai, &mut out)?;
    }
    Ok(out)
}

pub fn sdpa_from_str(text: &str) -> Result<SdpProblem, Error> {
    // Token stream with line numbers; comment lines start with `"` or `*`,
    // and the block-sizes line may use braces, parentheses or commas.
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let t = line.trim_start();
        if t.starts_with('"') || t.starts_with('*') {
            continue;
        }
        for tok in line.split(|c: char| c.is_whitespace() || "{}(),".contains(c)) {
            if !tok.is_empty() {
                tokens.push((ln + 1, tok));
            }
        }
    }
    struct Cursor<'a> {
        tokens: &'a [(usize, &'a str)],
        pos: usize,
        eof_line: usize,
    }
    impl<'a> Cursor<'a> {
        fn next(&mut self, what: &str) -> Result<(usize, &'a str), Error> {
            let t = self.tokens.get(self.pos).copied().ok_or_else(|| Error::Parse {
                line: self.eof_line,
                msg: format!("unexpected end of file, expected {what}"),
            })?;
            self.pos += 1;
            Ok(t)
        }
        fn done(&self) -> bool {
            self.pos >= self.tokens.len()
        }
    }
    let mut cur = Cursor { tokens: &tokens, pos: 0, eof_line: text.lines().count() };
    let parse_usize = |(line, tok): (usize, &str), what: &str| -> Result<usize, Error> {
        tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what}: {tok:?}") })
    };
    let parse_f64 = |(line, tok): (usize, &str), what: &str| -> Result<f64, Error> {
        tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what}: {tok:?}") })
    };

    let m = parse_usize(cur.next("constraint count")?, "constraint count")?;
    let nblocks = parse_usize(cur.next("block count")?, "block count")?;
    let mut blocks = Vec::with_capacity(nblocks);
    for _ in 0..nblocks {
        let (line, tok) = cur.next("block size")?;
        let s: i64 = tok
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("bad block size: {tok:?}") })?;
        if s == 0 {
            return Err(Error::Parse { line, msg: "zero block size".to_string() });
        }
        blocks.push(s);
    }
    let mut c_vec = Vec::with_capacity(m);
    for _ in 0..m {
        c_vec.push(parse_f64(cur.next("objective entry")?, "objective entry")?);
    }

    let sizes: Vec<usize> = blocks.iter().map(|&s| s.unsigned_abs() as usize).collect();
    let n: usize = sizes.iter().sum();
    let mut offsets = Vec::with_capacity(nblocks);
    let mut acc = 0;
    for &s in &sizes {
        offsets.push(acc);
        acc += s;
    }

    let mut triples: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); m + 1];
    let mut seen = std::collections::HashSet::new();
    while !cur.done() {
        let (line, tok) = cur.next("matrix number")?;
        let matno = parse_usize((line, tok), "matrix number")?;
        if matno > m {
            return Err(Error::Parse { line, msg: format!("matrix number {matno} exceeds {m}") });
        }
        let blk = parse_usize(cur.next("block number")?, "block number")?;
        if blk == 0 || blk > nblocks {
            return Err(Error::Parse { line, msg: format!("block number {blk} out of range") });
        }
        let li = parse_usize(cur.next("row index")?, "row index")?;
        let lj = parse_usize(cur.next("column index")?, "column index")?;
        let v = parse_f64(cur.next("entry value")?, "entry value")?;
        let sz = sizes[blk - 1];
        if li == 0 || li > sz || lj == 0 || lj > sz {
            return Err(Error::Parse { line, msg: format!("index ({li}, {lj}) outside block {blk}") });
        }
        if blocks[blk - 1] < 0 && li != lj {
            return Err(Error::Parse {
                line,
                msg: format!("off-diagonal entry in diagonal block {blk}"),
            });
        }
        let gi = offsets[blk - 1] + li.min(lj) - 1;
        let gj = offsets[blk - 1] + li.max(lj) - 1;
        if !seen.insert((matno, gi, gj)) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate entry for matrix {matno} at ({li}, {lj})"),
            });
        }
        triples[matno].push((gi, gj, v));
    }

    // The file stores F_0, F_1, ...; our data is C = -F_0, A_i = -F_i.
    let negated = |t: &[(usize, usize, f64)]| -> Result<SparseSymMatrix, Error> {
        let flipped: Vec<(usize, usize, f64)> = t.iter().map(|&(i, j, v)| (i, j, -v)).collect();
        Ok(SparseSymMatrix::from_triples(n, &flipped)?)
    };
    let c = negated(&triples[0])?;
    let mut a = Vec::with_capacity(m);
    for t in &triples[1..] {
        a.push(negated(t)?);
    }
    let b: Vec<f64> = c_vec.iter().map(|&v| -v).collect();
    SdpProblem::new(c, a, b, Some(blocks))
}
