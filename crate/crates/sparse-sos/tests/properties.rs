//! Randomized structural invariants of the support-extension hierarchies
//! and the Newton reduction, each exercised on a fixed-seed stream of
//! instances so failures reproduce exactly.

use std::collections::BTreeSet;

use chordal_graph::{all_maximal_cliques, chordal_extension, CliqueSet, ExtensionHeuristic, Graph};
use num_traits::ToPrimitive;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use sparse_matrix::SparsityPattern;
use sparse_sos::{
    cs_tssos_edges, csp_cliques, newton_basis, pattern_cliques, sign_symmetry_orbits, sos_check,
    tssos_edges, Exponent, ExponentSet, Polynomial, SolveSettings, Strategy, SupportExtension,
};

/// Random support drawn from sums of basis pairs, so coverage holds by
/// construction. Optionally restricted to sums landing inside a variable
/// clique.
fn random_support(
    rng: &mut ChaCha8Rng,
    basis: &ExponentSet,
    cliques: Option<&CliqueSet>,
) -> Vec<Exponent> {
    let mut supp: BTreeSet<Exponent> = BTreeSet::new();
    let want = rng.gen_range(1..=8);
    let mut guard = 0;
    while supp.len() < want && guard < 200 {
        guard += 1;
        let i = rng.gen_range(0..basis.len());
        let j = rng.gen_range(0..basis.len());
        let sum = basis.get(i).add(basis.get(j));
        if let Some(cs) = cliques {
            if !cs.iter().any(|c| sum.supported_on(c)) {
                continue;
            }
        }
        supp.insert(sum);
    }
    supp.into_iter().collect()
}

fn orbit_ids(supp: &[Exponent], basis: &ExponentSet) -> Vec<usize> {
    let orbits = sign_symmetry_orbits(supp, basis);
    let mut id = vec![0usize; basis.len()];
    for (o, members) in orbits.iter().enumerate() {
        for &m in members {
            id[m] = o;
        }
    }
    id
}

/// Patterns grow monotonically, stop within the |B|² bound, their cliques
/// transfer into the next step's cliques, and every block stays inside
/// one sign-symmetry orbit.
#[test]
fn support_chains_grow_monotonically_and_terminate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..120 {
        let n = rng.gen_range(1..=3);
        let basis = ExponentSet::monomials(n, 2);
        let supp = random_support(&mut rng, &basis, None);
        let ids = orbit_ids(&supp, &basis);
        for ext in [SupportExtension::Block, SupportExtension::Chordal] {
            let bound = basis.len() * basis.len() + 1;
            let chain = tssos_edges(&supp, &basis, ext, bound).unwrap();
            assert!(!chain.is_empty(), "case {case}: empty chain");
            assert!(chain.len() <= bound, "case {case}: chain exceeds bound");
            for step in chain.windows(2) {
                assert!(
                    step[0].is_subset_of(&step[1]),
                    "case {case}: pattern chain not monotone"
                );
                assert!(
                    step[0].edge_count() < step[1].edge_count(),
                    "case {case}: consecutive patterns not strictly larger"
                );
                let next = pattern_cliques(&step[1]).unwrap();
                for clique in pattern_cliques(&step[0]).unwrap().iter() {
                    assert!(
                        next.iter().any(|c| clique.iter().all(|v| c.contains(v))),
                        "case {case}: step clique does not transfer"
                    );
                }
            }
            for pat in &chain {
                for clique in pattern_cliques(pat).unwrap().iter() {
                    assert!(
                        clique.windows(2).all(|w| ids[w[0]] == ids[w[1]]),
                        "case {case}: block crosses a sign-symmetry orbit"
                    );
                }
            }
        }
    }
}

/// Joint chains never leave the correlative pattern, every joint block
/// fits inside a correlative exponent clique, and a complete variable
/// graph reduces the joint iteration to the plain one.
#[test]
fn joint_chains_stay_inside_the_correlative_pattern() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for case in 0..120 {
        let n = rng.gen_range(2..=4);
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        let vars =
            all_maximal_cliques(&chordal_extension(&g, ExtensionHeuristic::MinDegree)).unwrap();
        let basis = ExponentSet::monomials(n, 2);
        let supp = random_support(&mut rng, &basis, Some(&vars));
        if supp.is_empty() {
            continue;
        }
        let bound = basis.len() * basis.len() + 1;
        let (pruned, chain) =
            cs_tssos_edges(&supp, &basis, SupportExtension::Block, &vars, bound).unwrap();
        let exp_cliques = csp_cliques(&pruned, &vars).unwrap();
        let csp_pattern = SparsityPattern::from_cliques(&exp_cliques);
        for pat in &chain {
            assert!(
                pat.is_subset_of(&csp_pattern),
                "case {case}: joint pattern escapes the correlative one"
            );
            for clique in pattern_cliques(pat).unwrap().iter() {
                assert!(
                    exp_cliques.iter().any(|c| clique.iter().all(|v| c.contains(v))),
                    "case {case}: joint block outside every correlative clique"
                );
            }
        }

        let all = CliqueSet::new(n, vec![(0..n).collect()]).unwrap();
        let (full, joint) =
            cs_tssos_edges(&supp, &basis, SupportExtension::Block, &all, bound).unwrap();
        assert_eq!(full.len(), basis.len(), "case {case}: complete graph pruned the basis");
        let plain = tssos_edges(&supp, &basis, SupportExtension::Block, bound).unwrap();
        assert_eq!(joint, plain, "case {case}: complete graph changed the chain");
    }
}

/// Sums of squares are certified at the stabilized step, and the emitted
/// pieces really add back to the input, coefficient by coefficient.
#[test]
fn random_square_sums_are_certified_at_the_stabilized_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let settings = SolveSettings::default();
    let mut solved = 0usize;
    while solved < 110 {
        let n = rng.gen_range(1..=3);
        let pool = ExponentSet::monomials(n, 2);
        let mut f = Polynomial::zero(n);
        for _ in 0..rng.gen_range(1..=3) {
            let picks = rng.gen_range(1..=3);
            let mut terms: Vec<(i64, Vec<u32>)> = Vec::new();
            for _ in 0..picks {
                let e = pool.get(rng.gen_range(0..pool.len()));
                let c = *[-3i64, -2, -1, 1, 2, 3].choose(&mut rng).unwrap();
                terms.push((c, e.as_slice().to_vec()));
            }
            let borrowed: Vec<(i64, &[u32])> =
                terms.iter().map(|(c, e)| (*c, e.as_slice())).collect();
            let r = Polynomial::from_int_terms(n, &borrowed).unwrap();
            f = f.add(&r.pow(2));
        }
        if f.is_zero() {
            continue;
        }
        solved += 1;
        let cert = sos_check(&f, Strategy::Tssos, &settings).unwrap();
        let tol = 1e-6 * (1.0 + f.max_abs_coeff());
        assert!(cert.residual <= tol, "residual {} above {tol}", cert.residual);
        let mut total: std::collections::BTreeMap<Exponent, f64> = Default::default();
        for piece in &cert.pieces {
            for (e, c) in &piece.poly {
                *total.entry(e.clone()).or_insert(0.0) += c;
            }
        }
        for (e, c) in f.terms() {
            let got = total.remove(e).unwrap_or(0.0);
            let want = c.to_f64().unwrap();
            assert!((got - want).abs() <= tol, "coefficient of {e:?} off by {}", got - want);
        }
        for (e, c) in total {
            assert!(c.abs() <= tol, "stray coefficient {c} at {e:?}");
        }
    }
}

/// Exact 2D hull membership by Caratheodory: a point lies in the hull of
/// S iff it lies on a vertex, a segment, or inside a triangle of S.
fn in_hull_2d(p: (i64, i64), pts: &[(i64, i64)]) -> bool {
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    if pts.contains(&p) {
        return true;
    }
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let d = (b.0 - a.0, b.1 - a.1);
            let v = (p.0 - a.0, p.1 - a.1);
            if d.0 * v.1 - d.1 * v.0 == 0 {
                let dot = v.0 * d.0 + v.1 * d.1;
                if dot >= 0 && dot <= d.0 * d.0 + d.1 * d.1 {
                    return true;
                }
            }
        }
    }
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate().skip(i + 1) {
            for &c in &pts[j + 1..] {
                let orient = cross(a, b, c);
                if orient == 0 {
                    continue;
                }
                let s1 = cross(a, b, p);
                let s2 = cross(b, c, p);
                let s3 = cross(c, a, p);
                if orient > 0 && s1 >= 0 && s2 >= 0 && s3 >= 0 {
                    return true;
                }
                if orient < 0 && s1 <= 0 && s2 <= 0 && s3 <= 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// The Newton reduction agrees with brute-force hull membership on random
/// bivariate supports.
#[test]
fn planar_hull_membership_matches_a_triangle_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut checked = 0usize;
    while checked < 200 {
        let k = rng.gen_range(1..=6);
        let mut pts: BTreeSet<(u32, u32)> = BTreeSet::new();
        for _ in 0..k {
            let a = rng.gen_range(0..=4u32);
            let b = rng.gen_range(0..=(4 - a));
            pts.insert((a, b));
        }
        let degree = pts.iter().map(|&(a, b)| a + b).max().unwrap();
        if degree % 2 != 0 {
            continue;
        }
        checked += 1;
        let terms: Vec<(i64, Vec<u32>)> = pts
            .iter()
            .map(|&(a, b)| (rng.gen_range(1..=9), vec![a, b]))
            .collect();
        let borrowed: Vec<(i64, &[u32])> =
            terms.iter().map(|(c, e)| (*c, e.as_slice())).collect();
        let f = Polynomial::from_int_terms(2, &borrowed).unwrap();

        let hull: Vec<(i64, i64)> =
            pts.iter().map(|&(a, b)| (i64::from(a), i64::from(b))).collect();
        let expected: Vec<Exponent> = ExponentSet::monomials(2, degree / 2)
            .iter()
            .filter(|e| {
                in_hull_2d((2 * i64::from(e.get(0)), 2 * i64::from(e.get(1))), &hull)
            })
            .cloned()
            .collect();
        let got = newton_basis(&f).unwrap();
        assert_eq!(got.as_slice(), expected.as_slice(), "support {pts:?}");
    }
}
