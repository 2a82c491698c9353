use num_bigint::BigInt;
use proptest::prelude::*;
use sl213::cyclofield::{gauss_sqrt13, parse_rational, CycloElem, Rational, ORDER};

fn elem() -> impl Strategy<Value = CycloElem> {
    (proptest::array::uniform13(-20i64..=20), 1i64..=6).prop_map(|(c, d)| {
        CycloElem::from_ints13(&c).scale(&Rational::new(BigInt::from(1), BigInt::from(d)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in elem(), b in elem(), c in elem()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, CycloElem::zero());
        prop_assert_eq!(&a * &CycloElem::one(), a.clone());
    }

    #[test]
    fn nonzero_elements_invert(a in elem()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn galois_is_a_ring_map(a in elem(), b in elem(), k in 1i64..13) {
        prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
        prop_assert_eq!((&a + &b).galois(k), &a.galois(k) + &b.galois(k));
    }

    #[test]
    fn embedding_is_multiplicative(a in elem(), b in elem()) {
        let lhs = (&a * &b).to_complex();
        let rhs = a.to_complex() * b.to_complex();
        prop_assert!((lhs - rhs).norm() <= 1e-6 * (1.0 + rhs.norm()));
    }

    #[test]
    fn canonical_text_roundtrip(a in elem()) {
        prop_assert_eq!(CycloElem::parse_canonical(&a.to_canonical()).unwrap(), a);
    }
}

#[test]
fn zeta_has_order_13() {
    let z = CycloElem::zeta_power(1);
    assert!(z.pow(ORDER as u32).is_one());
    assert!(!z.pow(1).is_one());
    let sum = (0..ORDER as i64).fold(CycloElem::zero(), |acc, k| acc + CycloElem::zeta_power(k));
    assert!(sum.is_zero());
}

#[test]
fn gauss_sum_squares_to_13_and_is_positive() {
    let g = gauss_sqrt13();
    assert_eq!(g.pow(2), CycloElem::from_int(13));
    // Oracle: the real embedding of sum over k of e^{2 pi i k^2/13}.
    let direct: f64 = (0..13).map(|k: i64| (2.0 * std::f64::consts::PI * ((k * k) % 13) as f64 / 13.0).cos()).sum();
    assert!((g.to_complex().re - direct).abs() < 1e-9);
    assert!((direct - 13f64.sqrt()).abs() < 1e-9);
}

#[test]
fn trace_of_zeta_is_minus_one() {
    assert_eq!(CycloElem::zeta_power(5).trace(), parse_rational("-1").unwrap());
    assert_eq!(CycloElem::from_int(2).trace(), parse_rational("24").unwrap());
}

#[test]
fn zero_has_no_inverse() {
    assert!(CycloElem::zero().inv().is_err());
}
