use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Monomial exponent vector in `ℕⁿ`, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(e: Vec<u32>) -> Self {
        Exponent(e)
    }

    /// The constant monomial on `n` variables.
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The single variable `x_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|β|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Indices of the variables actually appearing.
    pub fn vars(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// True when every appearing variable lies in the sorted set.
    pub fn supported_on(&self, set: &[usize]) -> bool {
        (0..self.0.len()).all(|i| self.0[i] == 0 || set.binary_search(&i).is_ok())
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn double(&self) -> Exponent {
        Exponent(self.0.iter().map(|a| 2 * a).collect())
    }

    /// Componentwise difference if nonnegative.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Exponent)
    }

    /// Parity of the pairing `β·s` over GF(2), with `s` given as a set
    /// of variable indices.
    pub fn parity_against(&self, s: &[usize]) -> bool {
        s.iter().map(|&i| self.0[i]).sum::<u32>() % 2 == 1
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Sorted, deduplicated exponent list; bases are addressed by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    n: usize,
    items: Vec<Exponent>,
}

impl ExponentSet {
    pub fn new(n: usize, mut items: Vec<Exponent>) -> Result<Self, Error> {
        for e in &items {
            if e.n() != n {
                return Err(Error::Shape(format!(
                    "exponent {} has {} variables, expected {n}",
                    e,
                    e.n()
                )));
            }
        }
        items.sort();
        items.dedup();
        Ok(ExponentSet { n, items })
    }

    /// All monomials of total degree at most `d` on `n` variables.
    pub fn monomials(n: usize, d: u32) -> Self {
        let mut items = Vec::new();
        let mut cur = vec![0u32; n];
        enumerate_upto(&mut cur, 0, d, &mut items);
        items.sort();
        ExponentSet { n, items }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize) -> &Exponent {
        &self.items[i]
    }

    pub fn index_of(&self, e: &Exponent) -> Option<usize> {
        self.items.binary_search(e).ok()
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        self.index_of(e).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Exponent> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Exponent] {
        &self.items
    }
}

fn enumerate_upto(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Exponent>) {
    if i == cur.len() {
        out.push(Exponent(cur.clone()));
        return;
    }
    for v in 0..=left {
        cur[i] = v;
        enumerate_upto(cur, i + 1, left - v, out);
    }
    cur[i] = 0;
}

/// Multivariate polynomial with exact rational coefficients. Only
/// nonzero terms are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Exponent::zero(n), BigRational::one());
        Polynomial { n, terms }
    }

    pub fn variable(n: usize, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Exponent::unit(n, i), BigRational::one());
        Polynomial { n, terms }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Exponent, BigRational)>,
    {
        let mut map: BTreeMap<Exponent, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            if e.n() != n {
                return Err(Error::Shape(format!(
                    "term {} has {} variables, expected {n}",
                    e,
                    e.n()
                )));
            }
            let entry = map.entry(e).or_insert_with(BigRational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { n, terms: map })
    }

    /// Integer-coefficient terms given as `(coeff, exponents)` pairs;
    /// the usual way test fixtures are written down.
    pub fn from_int_terms(n: usize, terms: &[(i64, &[u32])]) -> Result<Self, Error> {
        Polynomial::from_terms(
            n,
            terms.iter().map(|&(c, e)| {
                (Exponent::new(e.to_vec()), BigRational::from_integer(BigInt::from(c)))
            }),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    /// Smallest total degree over the support; 0 for the zero polynomial.
    pub fn degree_min(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).min().unwrap_or(0)
    }

    pub fn coeff(&self, e: &Exponent) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    /// Support exponents in lexicographic order.
    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// Union of the variables of all terms.
    pub fn vars(&self) -> Vec<usize> {
        let mut present = vec![false; self.n];
        for e in self.terms.keys() {
            for i in e.vars() {
                present[i] = true;
            }
        }
        (0..self.n).filter(|&i| present[i]).collect()
    }

    /// Largest coefficient magnitude, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::MAX)).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms: BTreeMap<Exponent, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                let entry = terms.entry(e).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { n: self.n, terms }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * e.eval(x))
            .sum()
    }

    /// Parses the line format `coeff e1 e2 … en`, one term per line.
    /// Coefficients may be integers, fractions `p/q`, or decimals; blank
    /// lines and lines starting with `#` are skipped. The variable count
    /// is taken from the first term.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut toks = trimmed.split_whitespace();
            let coeff_tok = toks.next().unwrap();
            let coeff = parse_rational(coeff_tok)
                .ok_or_else(|| Error::Parse { line, msg: format!("bad coefficient {coeff_tok:?}") })?;
            let exps: Vec<u32> = toks
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse { line, msg: format!("bad exponent {t:?}") })
                })
                .collect::<Result<_, _>>()?;
            match n {
                None => n = Some(exps.len()),
                Some(n0) if n0 != exps.len() => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected {n0} exponents, found {}", exps.len()),
                    })
                }
                _ => {}
            }
            terms.push((Exponent::new(exps), coeff));
        }
        let n = n.ok_or(Error::Parse { line: 1, msg: "no terms".into() })?;
        Polynomial::from_terms(n, terms)
    }

    /// Inverse of [`Polynomial::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            out.push_str(&c.to_string());
            for i in 0..self.n {
                out.push_str(&format!(" {}", e.get(i)));
            }
            out.push('\n');
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { n: self.n, terms }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-BigRational::one()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let a = c.abs();
            if e.is_constant() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{a}*{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact rational from an integer, fraction `p/q`, or plain decimal token.
pub fn parse_rational(tok: &str) -> Option<BigRational> {
    if let Some((num, den)) = tok.split_once('/') {
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int: BigInt = if int == "-" || int.is_empty() { BigInt::zero() } else { int.parse().ok()? };
        let num: BigInt = frac.parse().ok()?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let abs = BigRational::new(int.abs() * &den + num, den);
        return Some(if neg { -abs } else { abs });
    }
    let n: BigInt = tok.parse().ok()?;
    Some(BigRational::from_integer(n))
}
