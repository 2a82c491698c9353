use proptest::prelude::*;
use sl213::grouprep::build_generators;
use sl213::polyring::{Monomial, PolyError, ZPoly};
use sl213::{CycloElem, MPoly};

fn small_poly() -> impl Strategy<Value = MPoly> {
    proptest::collection::vec((proptest::array::uniform6(0u8..=2), -5i64..=5), 1..5).prop_map(|ts| {
        MPoly::from_terms(ts.into_iter().map(|(e, c)| (Monomial::new(e), CycloElem::from_int(c))))
    })
}

fn point() -> impl Strategy<Value = Vec<CycloElem>> {
    proptest::collection::vec((-4i64..=4, 0i64..13), 6)
        .prop_map(|v| v.into_iter().map(|(a, k)| CycloElem::zeta_power(k).scale_int(a)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evaluation_is_a_ring_map(p in small_poly(), q in small_poly(), x in point()) {
        prop_assert_eq!(p.mul(&q).evaluate(&x), p.evaluate(&x) * q.evaluate(&x));
        prop_assert_eq!(p.add(&q).evaluate(&x), p.evaluate(&x) + q.evaluate(&x));
    }

    #[test]
    fn substitution_commutes_with_evaluation(p in small_poly(), x in point(), which in 0usize..2) {
        let g = build_generators();
        let m = if which == 0 { &g.s } else { &g.t };
        prop_assert_eq!(p.substitute_linear(m).evaluate(&x), p.evaluate(&m.apply(&x)));
    }

    #[test]
    fn substitution_composes(p in small_poly()) {
        let g = build_generators();
        let lhs = p.substitute_linear(&g.s).substitute_linear(&g.t);
        prop_assert_eq!(lhs, p.substitute_linear(&g.s.mul(&g.t)));
    }

    #[test]
    fn text_roundtrip(p in small_poly()) {
        prop_assert_eq!(MPoly::from_mpoly_text(&p.to_mpoly_text()).unwrap(), p.clone());
        prop_assert_eq!(MPoly::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn integer_mirror_agrees(p in small_poly(), q in small_poly()) {
        let (zp, zq) = (ZPoly::from_mpoly(&p).unwrap(), ZPoly::from_mpoly(&q).unwrap());
        prop_assert_eq!(zp.mul(&zq).unwrap().to_mpoly(), p.mul(&q));
    }
}

#[test]
fn hessian_of_binary_cubic() {
    // d^2/dz1^2 of z1^3 z2 is 6 z1 z2.
    let p = MPoly::parse("z1^3z2").unwrap();
    assert_eq!(p.derivative(0).derivative(0), MPoly::parse("6z1z2").unwrap());
    assert!(p.derivative(2).is_zero());
}

#[test]
fn invariance_of_sum_of_squares_under_t_fails() {
    // T scales coordinates by distinct roots of unity; z1^2 is not fixed.
    let g = build_generators();
    let p = MPoly::parse("z1^2").unwrap();
    assert_ne!(p.substitute_linear(&g.t), p);
}

#[test]
fn integer_overflow_is_reported() {
    let big = ZPoly::from_mpoly(&MPoly::parse("1000000000000z1").unwrap()).unwrap();
    assert!(matches!(big.pow(4), Err(PolyError::Overflow)));
}

#[test]
fn non_integral_coefficients_rejected() {
    let p = MPoly::parse("1/2z1").unwrap();
    assert!(matches!(ZPoly::from_mpoly(&p), Err(PolyError::NotIntegral(_))));
}

#[test]
fn corrupt_text_rejected() {
    assert!(MPoly::from_mpoly_text("MPOLY v2 0\n").is_err());
    assert!(MPoly::from_mpoly_text("MPOLY v1 1\nbogus\n").is_err());
}
