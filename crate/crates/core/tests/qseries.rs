use num_bigint::BigInt;
use num_complex::Complex64;
use sl213::grouprep::{build_generators, T_EXPONENTS};
use sl213::invariants::{build_invariant_symbolic, InvariantContext, InvariantSpec};
use sl213::polyring::ZPoly;
use sl213::qseries::*;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Integer-exponent coefficients of a series, q^0..q^order, after removing q^{shift/den}.
fn integer_coeffs(s: &ZSeries, shift: i64, order: i64) -> Vec<BigInt> {
    (0..=order).map(|n| s.coeff(shift + n * s.den())).collect()
}

/// Π_{n≥1} (1 − qⁿ) by direct multiplication.
fn euler_product(order: usize) -> Vec<i64> {
    let mut c = vec![0i64; order + 1];
    c[0] = 1;
    for n in 1..=order {
        for k in (n..=order).rev() {
            c[k] -= c[k - n];
        }
    }
    c
}

fn sigma(n: i64, k: u32) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(k)).sum()
}

#[test]
fn eta_matches_euler_product() {
    let ctx = SeriesContext::order13(12);
    let eta = eta_series(ctx).unwrap();
    let want: Vec<BigInt> = euler_product(11).into_iter().map(big).collect();
    assert_eq!(integer_coeffs(&eta, 13, 11), want);
    assert_eq!(eta.terms().len(), 5);
}

#[test]
fn delta_matches_eisenstein_oracle() {
    let order = 10usize;
    let ctx = SeriesContext::order13(order as u32);
    // (E4³ − E6²)/1728 with E4, E6 from divisor sums, in plain integers.
    let e4: Vec<i64> = (0..=order as i64).map(|n| if n == 0 { 1 } else { 240 * sigma(n, 3) }).collect();
    let e6: Vec<i64> = (0..=order as i64).map(|n| if n == 0 { 1 } else { -504 * sigma(n, 5) }).collect();
    let mul = |a: &[i128], b: &[i128]| -> Vec<i128> {
        let mut r = vec![0i128; order + 1];
        for i in 0..=order {
            for j in 0..=order - i {
                r[i + j] += a[i] * b[j];
            }
        }
        r
    };
    let e4: Vec<i128> = e4.into_iter().map(i128::from).collect();
    let e6: Vec<i128> = e6.into_iter().map(i128::from).collect();
    let e4c = mul(&mul(&e4, &e4), &e4);
    let e6s = mul(&e6, &e6);
    let oracle: Vec<BigInt> = (0..=order).map(|n| BigInt::from((e4c[n] - e6s[n]) / 1728)).collect();
    let delta = delta_series(ctx).unwrap();
    assert_eq!(integer_coeffs(&delta, 0, order as i64), oracle);
    assert_eq!(delta.coeff(2 * DEN13), big(-24));
    assert_eq!(delta.coeff(3 * DEN13), big(252));
    assert_eq!(delta.valuation(), DEN13);
}

#[test]
fn eisenstein_cubic_identity() {
    let ctx = SeriesContext::order13(12);
    let e4 = eisenstein(4, ctx).unwrap();
    let e6 = eisenstein(6, ctx).unwrap();
    assert_eq!(e4.coeff(DEN13), big(240));
    assert_eq!(e6.coeff(DEN13), big(-504));
    let lhs = e4.pow(3).sub(&e6.pow(2));
    assert!(lhs.agrees_with(&delta_series(ctx).unwrap().scale_int(1728)));
    assert!(lhs.prec() >= ctx.prec());
    assert!(eisenstein(8, ctx).is_err());
}

#[test]
fn j_expansion() {
    let ctx = SeriesContext::order13(3);
    let j = j_series(ctx).unwrap();
    assert_eq!(j.valuation(), -DEN13);
    assert_eq!(j.coeff(-DEN13), big(1));
    assert_eq!(j.coeff(0), big(744));
    assert_eq!(j.coeff(DEN13), big(196884));
    assert_eq!(j.coeff(2 * DEN13), big(21493760));
    assert_eq!(j.prec(), ctx.prec());
    let text = j.format_expansion();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q^{-1}: 1"));
    assert_eq!(lines.next(), Some("q^0: 744"));
}

#[test]
fn theta_leading_terms() {
    let ctx = SeriesContext::order13(8);
    let a = theta_vector13(ctx).unwrap();
    // a6: exponents 1/104, 1/104 + 6, 1/104 + 7.
    let a6: Vec<(i64, BigInt)> = a[5].terms().iter().take(3).cloned().collect();
    assert_eq!(a6, vec![(3, big(1)), (3 + 6 * DEN13, big(-1)), (3 + 7 * DEN13, big(-1))]);
    assert_eq!(a[3].leading(), Some((27, &big(-1))));
    assert!(theta_characteristic(1, 7, ctx).is_err());
    let b = theta_pair5(SeriesContext::order5(4)).unwrap();
    assert_eq!(b[1].leading(), Some((3, &big(1))));
    assert_eq!(b[0].leading(), Some((27, &big(1))));
}

#[test]
fn residue_classes_and_translation_phases() {
    let ctx = SeriesContext::order13(12);
    let a = theta_vector13(ctx).unwrap();
    assert_eq!(a[5].residue_class(104, 104), Some(1));
    assert_eq!(a[0].residue_class(104, 104), Some(17));
    for (i, s) in a.iter().enumerate() {
        assert_eq!(s.residue_class(104, 104), Some((65 + 8 * T_EXPONENTS[i]).rem_euclid(104)), "a{}", i + 1);
    }
    assert_eq!(a[0].add(&a[1]).residue_class(104, 104), None);
    // η and q·η share the class 1/24 mod 1.
    let eta = eta_series(ctx).unwrap();
    assert_eq!(eta.add(&eta.shift(DEN13)).residue_class(24, 24), Some(1));
}

#[test]
fn inversion_law_numeric() {
    let s = build_generators().s;
    for z in [Complex64::new(0.0, 1.0), Complex64::new(0.3, 0.8)] {
        let r = verify_inversion_law(&s, z, 1e-9);
        assert!(r.passed(), "{}: {}", r.name, r.witness);
    }
    // The transposed matrix is not the law.
    let r = verify_inversion_law(&s.transpose().neg(), Complex64::new(0.3, 0.8), 1e-9);
    assert!(!r.passed());
}

#[test]
fn inversion_law_reports_slow_convergence() {
    let s = build_generators().s;
    assert!(matches!(
        inversion_deviation(&s, Complex64::new(0.0, 0.01), 3, 1e-9),
        Err(SeriesError::NonConvergence { .. })
    ));
}

#[test]
fn form_series_leading_terms() {
    let sys = ThetaSystem::new(SeriesContext::order13(2)).unwrap();
    assert_eq!(sys.a_forms[0].leading(), Some((78, &big(1))));
    assert_eq!(sys.d_forms[11].leading(), Some((225, &big(-4))));
    assert_eq!(sys.g_forms[1].leading(), Some((258, &big(13))));
}

#[test]
fn invariant_class_matches_weight_zero_monomials() {
    let ctx = SeriesContext::order13(2);
    let a = theta_vector13(ctx).unwrap();
    let class = |i: usize| a[i].valuation().rem_euclid(DEN13);
    // z1 z4 and z1 z2 z3 have T-weight 0 mod 13.
    assert_eq!((T_EXPONENTS[0] + T_EXPONENTS[3]) % 13, 0);
    assert_eq!((class(0) + class(3)) % DEN13, invariant_exponent_class(2));
    assert_eq!((T_EXPONENTS[0] + T_EXPONENTS[1] + T_EXPONENTS[2]) % 13, 0);
    assert_eq!((class(0) + class(1) + class(2)) % DEN13, invariant_exponent_class(3));
    // z1 z2 has nonzero weight and lands elsewhere.
    assert_ne!((class(0) + class(1)) % DEN13, invariant_exponent_class(2));
}

#[test]
fn fused_power_sum_matches_polynomial_evaluation() {
    let ctx = SeriesContext::order13(4);
    let sys = ThetaSystem::new(ctx).unwrap();
    let ictx = InvariantContext::new();
    for (m, n) in [(1, 0), (0, 1), (3, 0), (0, 2), (2, 1)] {
        let poly = build_invariant_symbolic(&ictx, &InvariantSpec::raw(m, n), 30).unwrap();
        let direct = evaluate_zpoly_on_series(&ZPoly::from_mpoly(&poly).unwrap(), &sys.a);
        let fused = sys.power_sum_on_a(m, n);
        assert!(fused.prec() >= ctx.prec() && direct.prec() >= ctx.prec());
        assert!(fused.agrees_with(&direct), "Phi_{{{m},{n}}}");
    }
}

#[test]
fn eta_weighted_vectors() {
    let sys = ThetaSystem::new(SeriesContext::order13(3)).unwrap();
    let x = sys.power_sum_on_x(3, 0);
    let via_a = sys.eta.pow(12).mul(&sys.power_sum_on_a(3, 0));
    assert_eq!(x, via_a);
    assert_eq!(sys.power_sum_on_eta_multiple(3, 0, 3), sys.eta.pow(36).mul(&sys.power_sum_on_a(3, 0)));
}
