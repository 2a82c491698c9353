use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use sl213::invariants::{build_invariant_symbolic, InvariantSpec};
use sl213::modverify::{parse_selection, Normalization, Report, Suite, Target, Verifier, VerifyConfig};
use sl213::{MPoly, Rational};

fn verifier() -> &'static Verifier {
    static V: OnceLock<Verifier> = OnceLock::new();
    V.get_or_init(|| Verifier::new(VerifyConfig::default()).unwrap())
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn qpow(tau: Complex64, e: f64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * tau * e).exp()
}

/// η(τ)·a(τ) summed directly from the theta series and the eta product.
fn numeric_x(tau: Complex64) -> Vec<Complex64> {
    let chars = [(11.0, 1.0), (7.0, 1.0), (5.0, 1.0), (3.0, -1.0), (9.0, 1.0), (1.0, 1.0)];
    let eta = (1..200).fold(qpow(tau, 1.0 / 24.0), |acc, n| acc * (c(1.0) - qpow(tau, n as f64)));
    chars
        .iter()
        .map(|&(k, s)| {
            let a: Complex64 = (-60i64..=60)
                .map(|n| {
                    let n = n as f64;
                    let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
                    qpow(tau, k * k / 104.0 + (13.0 * n * n + k * n) / 2.0) * sign
                })
                .sum();
            eta * a * s
        })
        .collect()
}

fn divisor_series(tau: Complex64, k: u32, scale: f64) -> Complex64 {
    let mut acc = c(1.0);
    for n in 1..200u64 {
        let sigma: f64 = (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).powi(k as i32)).sum();
        acc += qpow(tau, n as f64) * sigma * scale;
    }
    acc
}

fn evaluate_complex(p: &MPoly, x: &[Complex64]) -> Complex64 {
    p.terms()
        .iter()
        .map(|(m, coef)| {
            let e = m.exps();
            (0..6).fold(coef.to_complex(), |acc, i| acc * x[i].powu(e[i] as u32))
        })
        .sum()
}

/// Raw Φ on x divided by the target form, by floating-point evaluation of the
/// symbolic polynomial at τ = 0.6i.
fn numeric_constant(m: u32, n: u32, target: impl Fn(Complex64, Complex64, Complex64, Complex64) -> Complex64) -> f64 {
    let v = verifier();
    let p = build_invariant_symbolic(v.invariant_context(), &InvariantSpec::raw(m, n), 42).unwrap();
    let tau = Complex64::new(0.0, 0.6);
    let x = numeric_x(tau);
    let eta = (1..200).fold(qpow(tau, 1.0 / 24.0), |acc, n| acc * (c(1.0) - qpow(tau, n as f64)));
    let delta = eta.powu(24);
    let e4 = divisor_series(tau, 3, 240.0);
    let e6 = divisor_series(tau, 5, -504.0);
    let ratio = evaluate_complex(&p, &x) / target(eta, delta, e4, e6);
    assert!(ratio.im.abs() < 1e-6 * ratio.re.abs().max(1.0), "ratio {ratio}");
    ratio.re
}

fn exact_constant(m: u32, n: u32, t: Target) -> f64 {
    verifier().derived_constant(m, n, t).0.unwrap().to_f64().unwrap()
}

#[test]
fn derived_degree_12_constants_match_float_oracle() {
    for (m, n, want) in [(3, 0, -13.0 * 30.0), (0, 2, -13.0 * 52.0)] {
        let got = numeric_constant(m, n, |_, d, _, _| d);
        assert!((got - want).abs() < 1e-6 * want.abs(), "Phi_{m},{n}: {got}");
        assert_eq!(exact_constant(m, n, Target::Delta), want);
    }
}

#[test]
fn derived_phi33_constant_matches_float_oracle() {
    let got = numeric_constant(3, 3, |_, d, _, e6| d * d * e6);
    let want = -13.0 * 96.0;
    assert!((got - want).abs() < 1e-5 * want.abs(), "{got}");
    assert_eq!(exact_constant(3, 3, Target::Delta2E6), want);
}

#[test]
fn suite_selection_and_alias() {
    assert_eq!(parse_selection(&["prop32"]).unwrap(), vec![Suite::Theta]);
    assert!(parse_selection(&["group", "bogus"]).is_err());
}

#[test]
fn theta_suite_passes() {
    let rs = verifier().run_suite(Suite::Theta);
    assert_eq!(rs.len(), 8);
    assert!(rs.iter().all(|r| r.passed()), "{rs:?}");
}

#[test]
fn leading_terms_cover_all_tables() {
    let rs = verifier().leading_term_checks();
    assert_eq!(rs.len(), 7 + 14 + 13 + 13);
    assert!(rs.iter().all(|r| r.passed()));
    let g12 = rs.iter().find(|r| r.name == "leading term of G12").unwrap();
    assert_eq!(g12.witness, "q^{35/52}(17 + O(q))");
}

#[test]
fn vanishing_generators_and_negative_control() {
    let rs = verifier().vanishing_checks();
    assert_eq!(rs.len(), 12);
    assert!(rs.iter().all(|r| r.passed()), "{rs:?}");
}

#[test]
fn stated_phi33_normalization_fails_with_witness() {
    let rs = verifier().core_identification_checks();
    let bad: Vec<_> = rs.iter().filter(|r| !r.passed()).collect();
    assert_eq!(bad.len(), 1);
    assert!(bad[0].name.starts_with("Phi_{3,3}(x)"));
    assert!(bad[0].witness.contains("32/9"));
}

#[test]
fn membership_constants_are_stable() {
    let rs = verifier().membership_checks();
    assert!(rs.iter().all(|r| r.passed()));
    assert!(rs[0].witness.starts_with("(c1, c2) = (857779/864, -902707/864)"));
}

#[test]
fn derived_normalization_closes_singularities() {
    let v = verifier();
    assert!(v.e8_checks(Normalization::Derived).iter().all(|r| r.passed()));
    assert!(v.q18e20_checks(Normalization::Derived).iter().all(|r| r.passed()));
    // j Φ₁₂⁵ = Φ₂₀³ does not involve Φ₃₃ and holds as stated.
    assert!(v.e8_checks(Normalization::Stated).iter().filter(|r| r.name.starts_with("j Phi12")).all(|r| r.passed()));
}

#[test]
fn parameter_tuples_are_seeded() {
    let cfg = VerifyConfig { draws: 3, ..Default::default() };
    let a = Verifier::new(cfg.clone()).unwrap();
    let b = Verifier::new(cfg).unwrap();
    let fam = sl213::invariants::Family::Q18E20;
    assert_eq!(a.parameter_tuples(fam), b.parameter_tuples(fam));
    assert_eq!(a.parameter_tuples(fam).len(), 3);
    let other = Verifier::new(VerifyConfig { seed: 1, draws: 3, ..Default::default() }).unwrap();
    assert_ne!(other.parameter_tuples(fam)[1], a.parameter_tuples(fam)[1]);
    assert!(a.parameter_tuples(fam)[1].iter().all(|r: &Rational| r.denom().to_i64().unwrap() <= 9));
}

#[test]
fn icosahedral_suite_isolates_jacobian_sign() {
    let rs = verifier().run_suite(Suite::Icosahedral);
    let failing: Vec<_> = rs.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
    assert_eq!(failing, vec!["T = -(1/20) Jacobian(f, H)"]);
}

#[test]
fn report_is_reproducible_and_roundtrips() {
    let cfg = VerifyConfig { order: 4, ..Default::default() };
    let suites = [Suite::Theta, Suite::Icosahedral];
    let r1 = Verifier::new(cfg.clone()).unwrap().run(&suites);
    let r2 = Verifier::new(cfg).unwrap().run(&suites);
    assert_eq!(r1.without_timings(), r2.without_timings());
    assert_eq!(Report::from_json(&r1.to_json()).unwrap(), r1);
    let md = r1.to_markdown();
    assert_eq!(md.matches("\n## ").count(), 2);
    assert!(md.contains("verified to order 4"));
}

#[test]
fn low_order_runs_still_compare_exactly() {
    let v = Verifier::new(VerifyConfig { order: 2, ..Default::default() }).unwrap();
    let rs = v.odd_identification_checks();
    assert!(rs.iter().all(|r| r.passed() && r.witness == "verified to order 2"));
}

#[test]
fn derived_high_degree_constants_match_float_oracle() {
    let eta8_delta2_e4 = |eta: Complex64, d: Complex64, e4: Complex64, _| eta.powu(8) * d * d * e4;
    let delta3_e6 = |_, d: Complex64, _, e6: Complex64| d.powu(3) * e6;
    for (m, n, want, t) in [(5, 2, -13.0 * 1954.0, 0), (2, 4, -13.0 * 692.0, 0), (3, 5, 13.0 * 5752.0, 1)] {
        let got = if t == 0 { numeric_constant(m, n, eta8_delta2_e4) } else { numeric_constant(m, n, delta3_e6) };
        assert!((got - want).abs() < 1e-4 * want.abs(), "Phi_{m},{n}: {got} vs {want}");
    }
}
