use sl213::invariants::*;
use sl213::CycloElem;
use std::sync::OnceLock;

fn ctx() -> &'static InvariantContext {
    static CTX: OnceLock<InvariantContext> = OnceLock::new();
    CTX.get_or_init(InvariantContext::new)
}

#[test]
fn quadratic_law_all_nu() {
    for nu in 0..13 {
        let r = verify_a_transformation(ctx(), nu);
        assert!(r.passed(), "{}: {}", r.name, r.witness);
    }
}

#[test]
fn quadratic_law_shifted_exponents_fail() {
    let rhs = a_transformation_rhs(&ctx().forms, 2, 1);
    assert!(!verify_a_against(ctx(), 2, &rhs).passed());
}

#[test]
fn radicals_resolve_without_flips() {
    let (rad, flips) = resolve_radicals(ctx()).unwrap();
    assert_eq!(flips, [false; 4]);
    for k in 1..=4 {
        let z = rad.r(k).to_complex();
        assert!(z.re.abs() < 1e-9 && z.im > 0.0);
    }
}

#[test]
fn cubic_law_all_nu() {
    let (rad, _) = resolve_radicals(ctx()).unwrap();
    for nu in 0..13 {
        for r in verify_d_transformation(ctx(), &rad, nu) {
            assert!(r.passed(), "{}: {}", r.name, r.witness);
        }
    }
}

#[test]
fn sextic_law_all_nu() {
    for nu in 0..13 {
        let r = verify_g_transformation(ctx(), nu);
        assert!(r.passed(), "{}: {}", r.name, r.witness);
    }
}

#[test]
fn generators_permute_points() {
    let c = ctx();
    let t = compute_group_permutation(c, &c.gens.t).unwrap();
    assert_eq!(t.sigma[INF], INF);
    assert_eq!(t.cycle_type(), vec![13, 1]);
    let s = compute_group_permutation(c, &c.gens.s).unwrap();
    assert_eq!(s.sigma[0], INF);
    assert_eq!(s.sigma[INF], 0);
    let h = compute_group_permutation(c, &c.h()).unwrap();
    assert!(h.cycle_type().iter().all(|&l| 6 % l == 0));
}

#[test]
fn non_group_matrix_rejected() {
    let c = ctx();
    let g = sl213::GMatrix::diagonal(&[CycloElem::from_int(2), CycloElem::one(), CycloElem::one(), CycloElem::one(), CycloElem::one(), CycloElem::one()]);
    assert!(compute_group_permutation(c, &g).is_err());
}

#[test]
fn degree_4_symbolic_invariance() {
    let h = build_invariant(ctx(), InvariantSpec::raw(1, 0), Strategy::Symbolic, 30).unwrap();
    for r in verify_invariance(ctx(), &h, InvarianceMode::Symbolic) {
        assert!(r.passed(), "{}: {}", r.name, r.witness);
    }
}

#[test]
fn degree_12_symbolic_invariance() {
    let h = build_invariant(ctx(), InvariantSpec::stated(0, 2), Strategy::Symbolic, 30).unwrap();
    if let InvariantHandle::Symbolic { poly, .. } = &h {
        assert!(poly.is_rational());
        assert_eq!(poly.degree(), 12);
    }
    for r in verify_invariance(ctx(), &h, InvarianceMode::Symbolic) {
        assert!(r.passed(), "{}: {}", r.name, r.witness);
    }
}

#[test]
fn sampled_matches_symbolic() {
    let spec = InvariantSpec::stated(3, 0);
    let sym = build_invariant(ctx(), spec.clone(), Strategy::Symbolic, 30).unwrap();
    let smp = build_invariant(ctx(), spec, Strategy::Sampled, 30).unwrap();
    let x: Vec<CycloElem> = [1, -2, 3, 0, 5, -1].iter().map(|&v| CycloElem::from_int(v)).collect();
    assert_eq!(sym.evaluate(ctx(), &x), smp.evaluate(ctx(), &x));
    for r in verify_invariance(ctx(), &smp, InvarianceMode::Points { samples: 20, seed: 20130013 }) {
        assert!(r.passed(), "{}: {}", r.name, r.witness);
    }
}

#[test]
fn budget_enforced() {
    let e = build_invariant(ctx(), InvariantSpec::stated(0, 7), Strategy::Symbolic, 30).unwrap_err();
    assert_eq!(e, InvariantError::BudgetExceeded { degree: 42, budget: 30 });
}

/// Independent route: w_∞^m δ_∞^n + w_0^m δ_0^n + Tr(w_1^m δ_1^n), in Q(ζ).
fn power_sum_by_trace(m: u32, n: u32) -> sl213::MPoly {
    let p = &ctx().points;
    let term = |nu: usize| p.w[nu].pow(m).mul(&p.delta[nu].pow(n));
    term(INF).add(&term(0)).add(&term(1).trace())
}

#[test]
fn projection_matches_trace_route() {
    for (m, n) in [(1, 0), (0, 1), (3, 0), (0, 2), (2, 1), (5, 0), (2, 2)] {
        let built = build_invariant_symbolic(ctx(), &InvariantSpec::raw(m, n), 30).unwrap();
        assert_eq!(built, power_sum_by_trace(m, n), "Phi_{{{m},{n}}}");
    }
}

#[test]
fn degree_30_symbolic_invariance_by_certificate() {
    let h = build_invariant(ctx(), InvariantSpec::stated(3, 3), Strategy::Symbolic, 30).unwrap();
    let x: Vec<CycloElem> = [2, 1, -1, 3, 0, 1].iter().map(|&v| CycloElem::from_int(v)).collect();
    assert_eq!(h.evaluate(ctx(), &x), evaluate_invariant(ctx(), h.spec(), &x));
    for r in verify_invariance(ctx(), &h, InvarianceMode::Symbolic) {
        assert!(r.passed(), "{}: {}", r.name, r.witness);
    }
}
