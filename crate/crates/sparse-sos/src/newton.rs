//! Newton polytope facial reduction: the candidate monomials for a
//! square decomposition of `f` are `B = {β : 2β ∈ conv(supp f)}`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::{Exponent, ExponentSet, Polynomial};

/// Monomials whose squares lie in the Newton polytope of `f`.
///
/// Candidates are cut down by per-coordinate and total-degree bounds of
/// the support, then confirmed either as a support point, as a midpoint
/// of two support points, or by an exact rational feasibility LP. The
/// result is therefore free of floating-point effects.
pub fn newton_basis(f: &Polynomial) -> Result<ExponentSet, Error> {
    let degree = f.degree();
    if degree % 2 == 1 {
        return Err(Error::OddDegree { degree });
    }
    let n = f.n();
    if f.is_zero() {
        return ExponentSet::new(n, Vec::new());
    }
    let supp = f.support();
    let mut cap = vec![0u32; n];
    let mut lo = u32::MAX;
    let mut hi = 0u32;
    for s in &supp {
        for i in 0..n {
            cap[i] = cap[i].max(s.get(i));
        }
        lo = lo.min(s.degree());
        hi = hi.max(s.degree());
    }
    // Any linear functional is maximized at support points, so these
    // bounds are valid for every hull member 2β.
    let half_cap: Vec<u32> = cap.iter().map(|c| c / 2).collect();
    let deg_lo = lo.div_ceil(2);
    let deg_hi = hi / 2;

    let supp_lookup: HashSet<&[u32]> = supp.iter().map(Exponent::as_slice).collect();
    let mut kept = Vec::new();
    let mut cur = vec![0u32; n];
    let mut candidates = Vec::new();
    enumerate_capped(&mut cur, 0, deg_hi, &half_cap, &mut candidates);

    for beta in candidates {
        let total = beta.degree();
        if total < deg_lo || total > deg_hi {
            continue;
        }
        let doubled = beta.double();
        if supp_lookup.contains(doubled.as_slice()) {
            kept.push(beta);
            continue;
        }
        // 2β = (s + t)/2 for support points s, t ⇔ t = 4β − s.
        let quad: Vec<u32> = doubled.as_slice().iter().map(|&e| 2 * e).collect();
        let midpoint = supp.iter().any(|s| {
            quad.iter()
                .zip(s.as_slice())
                .map(|(&q, &a)| q.checked_sub(a))
                .collect::<Option<Vec<u32>>>()
                .is_some_and(|t| supp_lookup.contains(t.as_slice()))
        });
        if midpoint || in_hull(&supp, &doubled) {
            kept.push(beta);
        }
    }
    ExponentSet::new(n, kept)
}

fn enumerate_capped(cur: &mut Vec<u32>, i: usize, left: u32, cap: &[u32], out: &mut Vec<Exponent>) {
    if i == cur.len() {
        out.push(Exponent::new(cur.clone()));
        return;
    }
    for v in 0..=left.min(cap[i]) {
        cur[i] = v;
        enumerate_capped(cur, i + 1, left - v, cap, out);
    }
    cur[i] = 0;
}

/// Exact convex-hull membership: is `p` a convex combination of
/// `points`? Decided by a phase-one simplex over the rationals.
pub fn in_hull(points: &[Exponent], p: &Exponent) -> bool {
    let n = p.n();
    let cols: Vec<Vec<BigRational>> = points
        .iter()
        .map(|s| {
            let mut col: Vec<BigRational> =
                s.as_slice().iter().map(|&e| BigRational::from_integer(BigInt::from(e))).collect();
            col.push(BigRational::one());
            col
        })
        .collect();
    let mut rhs: Vec<BigRational> =
        p.as_slice().iter().map(|&e| BigRational::from_integer(BigInt::from(e))).collect();
    rhs.push(BigRational::one());
    rational_lp_feasible(n + 1, &cols, &mut rhs)
}

/// Feasibility of `{λ ≥ 0 : Σ_j λ_j col_j = rhs}` with `rows` equations,
/// by minimizing the sum of artificial variables. Bland's rule keeps the
/// exact pivoting finite. `rhs` must be componentwise nonnegative.
fn rational_lp_feasible(rows: usize, cols: &[Vec<BigRational>], rhs: &mut [BigRational]) -> bool {
    let m = cols.len();
    let total = m + rows;
    // Tableau rows hold structural then artificial columns; basis starts
    // as the artificials, one per row.
    let mut t: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.extend((0..rows).map(|j| {
                if i == j { BigRational::one() } else { BigRational::zero() }
            }));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (m..total).collect();
    // Phase-one reduced costs: r_j = c_j − Σ_i t[i][j], with c = 0 on
    // structural and 1 on artificial columns.
    let mut red: Vec<BigRational> = (0..total)
        .map(|j| {
            let col_sum: BigRational = (0..rows).map(|i| t[i][j].clone()).sum();
            if j < m {
                -col_sum
            } else {
                BigRational::one() - col_sum
            }
        })
        .collect();
    let mut obj: BigRational = -rhs.iter().cloned().sum::<BigRational>();

    loop {
        let Some(enter) = (0..total).find(|&j| red[j].is_negative()) else {
            return obj.is_zero();
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..rows {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &t[i][enter];
            let better = match &best {
                None => true,
                Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        // The objective is bounded below by zero, so some entry of the
        // entering column must be positive.
        let leave = leave.expect("phase-one simplex cannot be unbounded");

        let pivot = t[leave][enter].clone();
        for x in t[leave].iter_mut() {
            *x /= &pivot;
        }
        rhs[leave] /= &pivot;
        for i in 0..rows {
            if i == leave || t[i][enter].is_zero() {
                continue;
            }
            let factor = t[i][enter].clone();
            for j in 0..total {
                let delta = &factor * &t[leave][j];
                t[i][j] -= delta;
            }
            let delta = &factor * &rhs[leave];
            rhs[i] -= delta;
        }
        if !red[enter].is_zero() {
            let factor = red[enter].clone();
            for j in 0..total {
                let delta = &factor * &t[leave][j];
                red[j] -= delta;
            }
            let delta = &factor * &rhs[leave];
            obj -= delta;
        }
        basis[leave] = enter;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    /// Independent planar oracle: p lies in the hull iff it is a support
    /// point, on a segment between two, or inside a nondegenerate
    /// triangle of three (Carathéodory in the plane). Exact integers.
    fn hull2d_contains(points: &[(i64, i64)], p: (i64, i64)) -> bool {
        fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
            let (ox, oy) = o;
            (a.0 - ox) as i128 * (b.1 - oy) as i128 - (a.1 - oy) as i128 * (b.0 - ox) as i128
        }
        if points.contains(&p) {
            return true;
        }
        for (i, &a) in points.iter().enumerate() {
            for &b in &points[i + 1..] {
                if cross(a, b, p) == 0 {
                    let d = (b.0 - a.0) as i128 * (p.0 - a.0) as i128
                        + (b.1 - a.1) as i128 * (p.1 - a.1) as i128;
                    let len = (b.0 - a.0) as i128 * (b.0 - a.0) as i128
                        + (b.1 - a.1) as i128 * (b.1 - a.1) as i128;
                    if d >= 0 && d <= len {
                        return true;
                    }
                }
            }
        }
        for (i, &a) in points.iter().enumerate() {
            for (j, &b) in points.iter().enumerate().skip(i + 1) {
                for &c in &points[j + 1..] {
                    let area = cross(a, b, c);
                    if area == 0 {
                        continue;
                    }
                    let d1 = cross(a, b, p);
                    let d2 = cross(b, c, p);
                    let d3 = cross(c, a, p);
                    let inside = if area > 0 {
                        d1 >= 0 && d2 >= 0 && d3 >= 0
                    } else {
                        d1 <= 0 && d2 <= 0 && d3 <= 0
                    };
                    if inside {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn e2(a: u32, b: u32) -> Exponent {
        Exponent::new(vec![a, b])
    }

    #[test]
    fn lp_agrees_with_planar_oracle() {
        // Deterministic sweep: every query point in a box against a few
        // fixed point sets, including degenerate (collinear) ones.
        let sets: Vec<Vec<(i64, i64)>> = vec![
            vec![(0, 0), (4, 0), (0, 4)],
            vec![(2, 2), (0, 0)],
            vec![(1, 1), (3, 3), (5, 5)],
            vec![(0, 4), (4, 0), (4, 4), (2, 2)],
            vec![(3, 1)],
            vec![(0, 0), (6, 0), (3, 5), (3, 2)],
        ];
        for pts in &sets {
            let exps: Vec<Exponent> = pts.iter().map(|&(a, b)| e2(a as u32, b as u32)).collect();
            for x in 0..=7i64 {
                for y in 0..=7i64 {
                    let got = in_hull(&exps, &e2(x as u32, y as u32));
                    let want = hull2d_contains(pts, (x, y));
                    assert_eq!(got, want, "set {pts:?}, query ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn univariate_quartic_keeps_low_powers() {
        // 1 + x⁴: hull of {0, 4} covers 0, 2, 4 = squares of 1, x, x².
        let f = Polynomial::from_int_terms(1, &[(1, &[0]), (1, &[4])]).unwrap();
        let b = newton_basis(&f).unwrap();
        let got: Vec<u32> = b.iter().map(|e| e.get(0)).collect();
        assert_eq!(got, vec![0, 1, 2]);
    }

    #[test]
    fn motzkin_like_cross_term() {
        // x²y² + 1: the hull is the segment from (0,0) to (2,2), so only
        // the constant and xy survive; x and y are cut away.
        let f = Polynomial::from_int_terms(2, &[(1, &[2, 2]), (1, &[0, 0])]).unwrap();
        let b = newton_basis(&f).unwrap();
        assert_eq!(b.as_slice(), &[e2(0, 0), e2(1, 1)]);
    }

    #[test]
    fn odd_degree_rejected() {
        let f = Polynomial::from_int_terms(1, &[(1, &[3])]).unwrap();
        assert!(matches!(newton_basis(&f), Err(Error::OddDegree { degree: 3 })));
    }

    #[test]
    fn zero_polynomial_has_empty_basis() {
        let b = newton_basis(&Polynomial::zero(2)).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn interior_point_needs_the_lp() {
        // Sextic simplex corners: (2,2) is inside conv{(0,0),(6,0),(0,6)}
        // but is neither a support point nor a midpoint of two, so only
        // the simplex can admit (1,1).
        let f =
            Polynomial::from_int_terms(2, &[(1, &[0, 0]), (1, &[6, 0]), (1, &[0, 6])]).unwrap();
        let b = newton_basis(&f).unwrap();
        assert!(b.contains(&e2(1, 1)));
        assert!(b.contains(&e2(2, 1)));
        assert!(b.contains(&e2(3, 0)));
        assert!(!b.contains(&e2(3, 1)));
    }
}
