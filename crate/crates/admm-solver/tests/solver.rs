use admm_solver::{
    psd_project, reference, solve_domain, solve_domain_with_log, solve_range, AdmmSettings,
    Status,
};
use chordal_graph::ExtensionHeuristic;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use sdp_model::{domain_decompose, gen_maxcut, range_decompose, SdpProblem};
use sparse_matrix::{extract, min_eigenvalue, SparseSymMatrix, SparsityPattern};

fn triangle() -> SdpProblem {
    let mut w = DMatrix::zeros(3, 3);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        w[(i, j)] = 1.0;
        w[(j, i)] = 1.0;
    }
    gen_maxcut(&w).unwrap()
}

/// Two 2×2 blocks in variables (x1, x2, d):
/// [[2x1, x1+x2], [x1+x2, 5−x1−x2−d]] ⪰ 0 and [[d, x1], [x1, x2+1]] ⪰ 0,
/// minimizing d. The second block forces d ≥ 0 and d = 0 is attained at
/// the origin, so the optimum of max bᵀy is exactly 0.
fn min_d_instance() -> SdpProblem {
    let c = SparseSymMatrix::from_triples(4, &[(1, 1, 5.0), (3, 3, 1.0)]).unwrap();
    let a_x1 = SparseSymMatrix::from_triples(
        4,
        &[(0, 0, -2.0), (0, 1, -1.0), (1, 1, 1.0), (2, 3, -1.0)],
    )
    .unwrap();
    let a_x2 =
        SparseSymMatrix::from_triples(4, &[(0, 1, -1.0), (1, 1, 1.0), (3, 3, -1.0)]).unwrap();
    let a_d = SparseSymMatrix::from_triples(4, &[(1, 1, 1.0), (2, 2, -1.0)]).unwrap();
    SdpProblem::new(c, vec![a_x1, a_x2, a_d], vec![0.0, 0.0, -1.0], Some(vec![2, 2])).unwrap()
}

/// Strictly feasible chain-pattern instance: b comes from a diagonally
/// dominant primal point and C from a diagonally dominant dual slack, so
/// both sides have interior points and strong duality holds.
fn chain_instance(n: usize, m: usize, seed: u64) -> SdpProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let pat = SparsityPattern::from_edges(n, &edges).unwrap();
    let entries = pat.entry_list();

    let mut x0 = SparseSymMatrix::zeros(pat.clone());
    for &(i, j) in &entries {
        let v = if i == j { 1.0 + rng.gen_range(0.0..0.5) } else { 0.3 * rng.gen_range(-1.0..1.0) };
        x0.set(i, j, v).unwrap();
    }

    let mut a = Vec::new();
    let mut b = Vec::new();
    for _ in 0..m {
        let mut ai = SparseSymMatrix::zeros(pat.clone());
        for &(i, j) in &entries {
            ai.set(i, j, rng.gen_range(-1.0..1.0)).unwrap();
        }
        b.push(ai.inner(&x0));
        a.push(ai);
    }

    let y0: Vec<f64> = (0..m).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let mut c = SparseSymMatrix::zeros(pat);
    for &(i, j) in &entries {
        let z0 = if i == j { 1.5 } else { 0.2 * rng.gen_range(-1.0..1.0) };
        let shift: f64 = a.iter().zip(&y0).map(|(ai, y)| y * ai.get(i, j)).sum();
        c.set(i, j, z0 + shift).unwrap();
    }
    SdpProblem::new(c, a, b, None).unwrap()
}

#[test]
fn min_d_instance_reaches_the_analytic_optimum() {
    let p = min_d_instance();
    let oracle = reference::solve_dense(&p, 1e-7, 200_000);
    assert!(oracle.converged);
    assert!(oracle.dual_objective.abs() < 1e-4, "oracle value {}", oracle.dual_objective);

    let d = range_decompose(p, ExtensionHeuristic::McsFill);
    assert_eq!(d.cliques().len(), 2);
    // Strict complementarity fails at the optimum (block 1 loses rank on
    // both sides), so the tail converges slowly; 1e-6 stays within the
    // default iteration cap.
    let s = AdmmSettings { eps_abs: 1e-6, eps_rel: 1e-6, ..AdmmSettings::default() };
    let sol = solve_range(&d, &s).unwrap();
    assert_eq!(sol.status(), Status::Solved);
    assert!(sol.objective().abs() < 1e-4, "solver value {}", sol.objective());
    assert!((sol.objective() - oracle.objective()).abs() < 1e-4);
}

#[test]
fn block_diagonal_instance_splits_into_dense_blocks() {
    // Constraints stay within their block, so the joint optimum is the
    // sum of the per-block optima and the decomposition is exact
    // re-blocking.
    let c = SparseSymMatrix::from_triples(
        5,
        &[(0, 0, 1.0), (0, 1, -0.4), (1, 1, 1.2), (2, 2, 0.8), (2, 4, 0.3), (3, 3, 1.1), (4, 4, 0.9), (3, 4, -0.2)],
    )
    .unwrap();
    let a1 = SparseSymMatrix::from_triples(5, &[(0, 0, 1.0), (1, 1, 1.0), (0, 1, 0.5)]).unwrap();
    let a2 = SparseSymMatrix::from_triples(5, &[(2, 2, 1.0), (3, 3, 2.0), (4, 4, 1.0)]).unwrap();
    let p = SdpProblem::new(c, vec![a1, a2], vec![1.0, 2.0], Some(vec![2, 3])).unwrap();

    let block1 = SdpProblem::new(
        SparseSymMatrix::from_triples(2, &[(0, 0, 1.0), (0, 1, -0.4), (1, 1, 1.2)]).unwrap(),
        vec![SparseSymMatrix::from_triples(2, &[(0, 0, 1.0), (1, 1, 1.0), (0, 1, 0.5)]).unwrap()],
        vec![1.0],
        None,
    )
    .unwrap();
    let block2 = SdpProblem::new(
        SparseSymMatrix::from_triples(3, &[(0, 0, 0.8), (0, 2, 0.3), (1, 1, 1.1), (2, 2, 0.9), (1, 2, -0.2)]).unwrap(),
        vec![SparseSymMatrix::from_triples(3, &[(0, 0, 1.0), (1, 1, 2.0), (2, 2, 1.0)]).unwrap()],
        vec![2.0],
        None,
    )
    .unwrap();

    let o1 = reference::solve_dense(&block1, 1e-8, 200_000);
    let o2 = reference::solve_dense(&block2, 1e-8, 200_000);
    assert!(o1.converged && o2.converged);
    let want = o1.objective() + o2.objective();

    let d = domain_decompose(p, ExtensionHeuristic::McsFill);
    let sol = solve_domain(&d, &AdmmSettings::default()).unwrap();
    assert_eq!(sol.status(), Status::Solved);
    assert!((sol.objective() - want).abs() < 1e-3, "{} vs {}", sol.objective(), want);
}

#[test]
fn single_clique_matches_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 4;
    let pat = SparsityPattern::dense(n);
    let entries = pat.entry_list();
    let mut x0 = SparseSymMatrix::zeros(pat.clone());
    for &(i, j) in &entries {
        let v = if i == j { 2.0 } else { 0.2 * rng.gen_range(-1.0..1.0) };
        x0.set(i, j, v).unwrap();
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for _ in 0..3 {
        let mut ai = SparseSymMatrix::zeros(pat.clone());
        for &(i, j) in &entries {
            ai.set(i, j, rng.gen_range(-1.0..1.0)).unwrap();
        }
        b.push(ai.inner(&x0));
        a.push(ai);
    }
    let mut c = SparseSymMatrix::zeros(pat);
    for &(i, j) in &entries {
        c.set(i, j, if i == j { 2.0 } else { 0.1 }).unwrap();
    }
    let p = SdpProblem::new(c, a, b, None).unwrap();

    let oracle = reference::solve_dense(&p, 1e-8, 300_000);
    assert!(oracle.converged);
    let d = range_decompose(p, ExtensionHeuristic::McsFill);
    assert_eq!(d.cliques().len(), 1);
    let sol = solve_range(&d, &AdmmSettings::default()).unwrap();
    assert_eq!(sol.status(), Status::Solved);
    assert!(
        (sol.objective() - oracle.objective()).abs() < 1e-3 * (1.0 + oracle.objective().abs())
    );
}

#[test]
fn chain_instances_match_oracle_and_each_other() {
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(4..=14);
        let m = rng.gen_range(2..=8);
        let p = chain_instance(n, m, seed);

        let oracle = reference::solve_dense(&p, 1e-7, 400_000);
        assert!(oracle.converged, "oracle stalled on seed {seed}");

        let dd = domain_decompose(p.clone(), ExtensionHeuristic::McsFill);
        let dom = solve_domain(&dd, &AdmmSettings::default()).unwrap();
        assert_eq!(dom.status(), Status::Solved, "domain stalled on seed {seed}");

        let dr = range_decompose(p, ExtensionHeuristic::McsFill);
        let ran = solve_range(&dr, &AdmmSettings::default()).unwrap();
        assert_eq!(ran.status(), Status::Solved, "range stalled on seed {seed}");

        let scale = 1.0 + oracle.objective().abs();
        assert!(
            (dom.objective() - oracle.objective()).abs() < 1e-3 * scale,
            "seed {seed}: domain {} oracle {}",
            dom.objective(),
            oracle.objective()
        );
        assert!(
            (dom.objective() - ran.objective()).abs() < 1e-3 * (1.0 + dom.objective().abs()),
            "seed {seed}: domain {} range {}",
            dom.objective(),
            ran.objective()
        );
    }
}

#[test]
fn solved_iterates_satisfy_the_fixed_point_certificate() {
    let p = chain_instance(10, 5, 42);
    let d = domain_decompose(p.clone(), ExtensionHeuristic::McsFill);
    let s = AdmmSettings::default();
    let sol = solve_domain(&d, &s).unwrap();
    assert_eq!(sol.status(), Status::Solved);
    let x = sol.x().unwrap();
    let xn = x.norm_fro();
    // Clique submatrices sit within the consistency gap of their PSD
    // projections, so their eigenvalues clear the stopping bound.
    for c in d.cliques().iter() {
        let sub = extract(x, c);
        let bound = s.eps_abs * (c.len() as f64).sqrt() + s.eps_rel * xn.max(sub.norm());
        assert!(min_eigenvalue(&sub) >= -bound * 10.0);
    }
    for (ai, bi) in p.a().iter().zip(p.b()) {
        let ax = ai.inner(x);
        assert!((ax - bi).abs() <= s.eps_abs + s.eps_rel * ax.abs().max(bi.abs()) + 1e-9);
    }
}

#[test]
fn completed_solution_is_psd_and_agrees_on_the_pattern() {
    let p = chain_instance(8, 4, 11);
    let d = domain_decompose(p, ExtensionHeuristic::McsFill);
    // The completion is PSD to the accuracy of the iterate, so solve
    // tighter than the bound under test.
    let s = AdmmSettings { eps_abs: 1e-7, eps_rel: 1e-7, ..AdmmSettings::default() };
    let sol = solve_domain(&d, &s).unwrap();
    assert_eq!(sol.status(), Status::Solved);
    let x = sol.x().unwrap();
    let xc = sol.x_completed().expect("solved domain iterate completes");
    assert!(min_eigenvalue(xc) > -1e-5 * (1.0 + x.max_abs()));
    for (i, j, v) in x.entries() {
        assert!((xc[(i, j)] - v).abs() < 1e-10);
    }
}

#[test]
fn objective_is_invariant_under_penalty_scaling() {
    let instances = [triangle(), chain_instance(9, 4, 5)];
    for p in instances {
        let d = domain_decompose(p, ExtensionHeuristic::McsFill);
        let mut objectives = Vec::new();
        for rho in [0.1, 1.0, 10.0] {
            let s = AdmmSettings { rho, ..AdmmSettings::default() };
            let sol = solve_domain(&d, &s).unwrap();
            assert_eq!(sol.status(), Status::Solved, "rho {rho} stalled");
            objectives.push(sol.objective());
        }
        for w in objectives.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-3, "objectives {objectives:?}");
        }
    }
}

#[test]
fn residuals_shrink_across_decades_on_the_golden_instance() {
    let d = domain_decompose(triangle(), ExtensionHeuristic::McsFill);
    // Tolerances far below reach: the log then covers every iteration
    // up to the cap.
    let s = AdmmSettings {
        eps_abs: 1e-14,
        eps_rel: 1e-14,
        max_iter: 1000,
        check_every: 1,
        ..AdmmSettings::default()
    };
    let mut log = Vec::new();
    let sol = solve_domain_with_log(&d, &s, &mut log).unwrap();
    assert_eq!(sol.status(), Status::MaxIter);

    let text = String::from_utf8(log).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("iter,primal_res,dual_res,objective,rho"));
    let combined: Vec<f64> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            f[1].parse::<f64>().unwrap() + f[2].parse::<f64>().unwrap()
        })
        .collect();
    assert_eq!(combined.len(), 1000);
    for k in [1usize, 10, 100] {
        assert!(
            combined[10 * k - 1] <= combined[k - 1],
            "residual grew from iteration {k} to {}",
            10 * k
        );
    }
}

#[test]
fn adaptive_penalty_still_reaches_the_optimum() {
    let p = chain_instance(8, 4, 21);
    let oracle = reference::solve_dense(&p, 1e-7, 400_000);
    assert!(oracle.converged);
    let d = domain_decompose(p, ExtensionHeuristic::McsFill);
    let s = AdmmSettings { rho: 50.0, adaptive_rho: true, ..AdmmSettings::default() };
    let sol = solve_domain(&d, &s).unwrap();
    assert_eq!(sol.status(), Status::Solved);
    assert!((sol.objective() - oracle.objective()).abs() < 1e-3 * (1.0 + oracle.objective().abs()));
}

mod projection_properties {
    use super::*;
    use proptest::prelude::*;

    fn symmetric(n: usize, vals: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            vals[(a * n + b) % vals.len()]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn projection_is_idempotent(
            n in 1usize..7,
            vals in proptest::collection::vec(-5.0f64..5.0, 49),
        ) {
            let m = symmetric(n, &vals);
            let p = psd_project(&m).unwrap();
            let pp = psd_project(&p).unwrap();
            let scale = 1.0 + m.amax();
            prop_assert!((&pp - &p).amax() <= 1e-9 * scale);
            prop_assert!(min_eigenvalue(&p) >= -1e-9 * scale);
        }

        #[test]
        fn projection_is_one_lipschitz(
            n in 1usize..7,
            va in proptest::collection::vec(-5.0f64..5.0, 49),
            vb in proptest::collection::vec(-5.0f64..5.0, 49),
        ) {
            let a = symmetric(n, &va);
            let b = symmetric(n, &vb);
            let pa = psd_project(&a).unwrap();
            let pb = psd_project(&b).unwrap();
            let dist_in = (&a - &b).norm();
            let dist_out = (&pa - &pb).norm();
            prop_assert!(dist_out <= dist_in + 1e-9 * (1.0 + dist_in));
        }
    }
}
