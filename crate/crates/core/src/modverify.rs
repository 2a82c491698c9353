//! Verification suites and reports.
//!
//! Every check returns a [`CheckResult`] whose first citation names the
//! result it belongs to; the markdown report groups on it. Series identities
//! are compared through q^order inclusive, with all inputs computed one
//! integer order deeper so that products involving j keep full precision.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclofield::Rational;
use crate::grouprep::{
    build_word_elements, generate_group, lift_word_2x2, verify_lift, verify_relations,
    verify_word_elements, T_EXPONENTS,
};
use crate::invariants::{
    a_transformation_rhs, build_invariant, build_invariant_symbolic, build_parametrized,
    compute_group_permutation, normalization_entry, random_point, resolve_radicals, verify_a_against,
    verify_a_transformation, verify_d_transformation, verify_g_transformation, verify_invariance, Family,
    InvarianceMode, InvariantContext, InvariantError, InvariantSpec, Strategy, INF,
};
use crate::polyring::{MPoly, ZPoly};
use crate::qseries::{
    eisenstein, eta_series, evaluate_zpoly_on_series, format_exponent, j_series, theta_pair5, theta_vector13,
    to_rational, verify_inversion_law, QExp, QSeries, SeriesContext, SeriesError, ThetaSystem, ZSeries,
    THETA13_CHARS,
};
use crate::report::{all_passed, CheckResult};

pub const REPORT_VERSION: &str = "1";

pub mod anchor {
    pub const GROUP: &str = "generator relations and group order";
    pub const WORD: &str = "word element H and integer lift";
    pub const TRANSFORM: &str = "transformation laws of the forms";
    pub const LEADING: &str = "leading terms of the form series";
    pub const INVARIANCE: &str = "invariance of the power sums";
    pub const CORE: &str = "modular identification in degrees 12, 20 and 30";
    pub const ODD: &str = "modular identification in degree 18 and odd sextic powers";
    pub const HIGH: &str = "modular identification in degrees 32, 42 and 44";
    pub const VANISHING: &str = "vanishing ideal of the modular curve";
    pub const E8: &str = "E8 singularity and j-decomposition";
    pub const Q18E20: &str = "Q18 and E20 singularities";
    pub const ICOSAHEDRAL: &str = "icosahedral baseline";
    pub const THETA: &str = "theta transformation law";
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?} (expected group, forms, invariance, modular, singularities, icosahedral, prop32, theta or all)")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Group,
    Forms,
    Invariance,
    Modular,
    Singularities,
    Icosahedral,
    Theta,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Group,
        Suite::Forms,
        Suite::Invariance,
        Suite::Modular,
        Suite::Singularities,
        Suite::Icosahedral,
        Suite::Theta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Forms => "forms",
            Suite::Invariance => "invariance",
            Suite::Modular => "modular",
            Suite::Singularities => "singularities",
            Suite::Icosahedral => "icosahedral",
            Suite::Theta => "theta",
        }
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "group" => Ok(Suite::Group),
            "forms" => Ok(Suite::Forms),
            "invariance" => Ok(Suite::Invariance),
            "modular" => Ok(Suite::Modular),
            "singularities" => Ok(Suite::Singularities),
            "icosahedral" => Ok(Suite::Icosahedral),
            "theta" | "prop32" => Ok(Suite::Theta),
            other => Err(VerifyError::UnknownSuite(other.to_string())),
        }
    }
}

/// Resolves suite names (with `all`) to a deduplicated list in declared order.
pub fn parse_selection<S: AsRef<str>>(names: &[S]) -> Result<Vec<Suite>, VerifyError> {
    let mut out = Vec::new();
    for n in names {
        if n.as_ref() == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(n.as_ref().parse()?);
        }
    }
    if out.is_empty() {
        out.extend(Suite::ALL);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Truncation in integer q-orders.
    pub order: u32,
    pub degree_budget: u32,
    pub seed: u64,
    pub draws: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { order: 12, degree_budget: 30, seed: 20130013, draws: 5 }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.order == 0 {
            return Err(VerifyError::InvalidConfig("order must be at least 1".into()));
        }
        if self.draws == 0 {
            return Err(VerifyError::InvalidConfig("draws must be at least 1".into()));
        }
        if self.degree_budget < 12 {
            return Err(VerifyError::InvalidConfig("degree budget must be at least 12".into()));
        }
        Ok(())
    }
}

fn anchored(mut r: CheckResult, anchor: &str) -> CheckResult {
    r.citations.insert(0, anchor.to_string());
    r
}

fn timed(f: impl FnOnce() -> CheckResult) -> CheckResult {
    let t = Instant::now();
    let r = f();
    r.with_millis(t.elapsed().as_millis() as u64)
}

fn timed_all(f: impl FnOnce() -> Vec<CheckResult>) -> Vec<CheckResult> {
    let t = Instant::now();
    let rs = f();
    let each = t.elapsed().as_millis() as u64 / rs.len().max(1) as u64;
    rs.into_iter().map(|r| r.with_millis(each)).collect()
}

fn phi_label(m: u32, n: u32) -> String {
    format!("Phi_{{{m},{n}}}")
}

/// Modular forms that invariants are identified with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Zero,
    Delta,
    DeltaE6,
    Eta8DeltaE4,
    Delta2E6,
    Eta8Delta2E4,
    Delta3E6,
    Eta8Delta3E4,
}

impl Target {
    pub fn label(self) -> &'static str {
        match self {
            Target::Zero => "0",
            Target::Delta => "Delta",
            Target::DeltaE6 => "Delta E6",
            Target::Eta8DeltaE4 => "eta^8 Delta E4",
            Target::Delta2E6 => "Delta^2 E6",
            Target::Eta8Delta2E4 => "eta^8 Delta^2 E4",
            Target::Delta3E6 => "Delta^3 E6",
            Target::Eta8Delta3E4 => "eta^8 Delta^3 E4",
        }
    }
}

/// (m, n, target) with Φ_{m,n}(x) identified with the target form.
pub type Identification = (u32, u32, Target);

/// Identifications with degree 12, 20 and 30 invariants on x.
pub const CORE_IDENTIFICATIONS: [Identification; 13] = [
    (1, 0, Target::Zero),
    (2, 0, Target::Zero),
    (1, 1, Target::Zero),
    (2, 1, Target::Zero),
    (4, 0, Target::Zero),
    (1, 2, Target::Zero),
    (3, 0, Target::Delta),
    (0, 2, Target::Delta),
    (5, 0, Target::Eta8DeltaE4),
    (2, 2, Target::Eta8DeltaE4),
    (0, 5, Target::Delta2E6),
    (3, 3, Target::Delta2E6),
    (6, 1, Target::Delta2E6),
];

/// Degree 18 and the vanishing sums with odd powers of δ.
pub const ODD_IDENTIFICATIONS: [Identification; 7] = [
    (3, 1, Target::DeltaE6),
    (0, 3, Target::DeltaE6),
    (1, 3, Target::Zero),
    (4, 1, Target::Zero),
    (1, 5, Target::Zero),
    (4, 3, Target::Zero),
    (7, 1, Target::Zero),
];

pub const HIGH_IDENTIFICATIONS: [Identification; 8] = [
    (8, 0, Target::Eta8Delta2E4),
    (5, 2, Target::Eta8Delta2E4),
    (2, 4, Target::Eta8Delta2E4),
    (0, 7, Target::Delta3E6),
    (3, 5, Target::Delta3E6),
    (6, 3, Target::Delta3E6),
    (9, 1, Target::Delta3E6),
    (11, 0, Target::Eta8Delta3E4),
];

/// Degree-44 sums lying in η⁸Δ²·span(E₄⁴, E₄E₆²).
pub const MEMBERSHIP: [(u32, u32); 3] = [(8, 2), (5, 4), (2, 6)];

/// Generators of the ideal of the curve: Φ₄, Φ₈, Φ₁₀, Φ₁₄ and the further
/// seven generators of J.
pub const VANISHING_GENERATORS: [(u32, u32); 11] =
    [(1, 0), (2, 0), (1, 1), (2, 1), (4, 0), (1, 2), (1, 3), (4, 1), (1, 5), (4, 3), (7, 1)];

/// Leading terms of the A-series: (index, exponent numerator, denominator, coefficient).
pub const A_LEADING: [(usize, i64, i64, i64); 7] =
    [(0, 1, 4, 1), (1, 17, 52, 2), (2, 29, 52, 2), (3, 49, 52, 1), (4, 25, 52, -1), (5, 9, 52, -1), (6, 1, 52, -1)];

/// D_0..D_12 then D_∞.
pub const D_LEADING: [(usize, i64, i64, i64); 14] = [
    (0, 15, 8, 1),
    (1, 99, 104, 2),
    (2, 3, 104, -1),
    (3, 11, 104, 1),
    (4, 19, 104, -2),
    (5, 27, 104, -1),
    (6, 35, 104, -1),
    (7, 43, 104, 1),
    (8, 51, 104, 3),
    (9, 59, 104, -2),
    (10, 67, 104, 1),
    (11, 75, 104, -4),
    (12, 83, 104, -1),
    (INF, 7, 8, -1),
];

pub const G_LEADING: [(usize, i64, i64, i64); 13] = [
    (0, 7, 4, 1),
    (1, 43, 52, 13),
    (2, 47, 52, -22),
    (3, 51, 52, -21),
    (4, 3, 52, -1),
    (5, 7, 52, 2),
    (6, 11, 52, 2),
    (7, 15, 52, -2),
    (8, 19, 52, -8),
    (9, 23, 52, 6),
    (10, 27, 52, 1),
    (11, 31, 52, -8),
    (12, 35, 52, 17),
];

/// The ζ-graded pieces of w_ν as sums c·A_i·A_j, with leading terms.
/// (label, terms c·A_i·A_j, exponent numerator, denominator, coefficient).
pub type ProductLeading = (&'static str, &'static [(i64, usize, usize)], i64, i64, i64);

pub const A_PRODUCT_LEADING: [ProductLeading; 13] = [
    ("A0^2+2(A1A5+A2A3+A4A6)", &[(1, 0, 0), (2, 1, 5), (2, 2, 3), (2, 4, 6)], 1, 2, -1),
    ("A0A1+A2A6", &[(1, 0, 1), (1, 2, 6)], 41, 26, -3),
    ("A0A4+A2A5", &[(1, 0, 4), (1, 2, 5)], 19, 26, -3),
    ("A0A3+A5A6", &[(1, 0, 3), (1, 5, 6)], 5, 26, 1),
    ("A0A5+A3A4", &[(1, 0, 5), (1, 3, 4)], 11, 26, -1),
    ("A0A6+A1A3", &[(1, 0, 6), (1, 1, 3)], 7, 26, -1),
    ("A0A2+A1A4", &[(1, 0, 2), (1, 1, 4)], 47, 26, -1),
    ("A1^2+2A4A5", &[(1, 1, 1), (2, 4, 5)], 17, 26, 6),
    ("A3^2+2A1A2", &[(1, 3, 3), (2, 1, 2)], 23, 26, 8),
    ("A4^2+2A3A6", &[(1, 4, 4), (2, 3, 6)], 25, 26, -1),
    ("A5^2+2A1A6", &[(1, 5, 5), (2, 1, 6)], 9, 26, -3),
    ("A2^2+2A3A5", &[(1, 2, 2), (2, 3, 5)], 29, 26, 2),
    ("A6^2+2A4A2", &[(1, 6, 6), (2, 4, 2)], 1, 26, 1),
];

pub const ICOSA_F: &str = "z1^11z2+11z1^6z2^6-z1z2^11";
pub const ICOSA_H: &str = "-z1^20-z2^20+228z1^15z2^5-228z1^5z2^15-494z1^10z2^10";
pub const ICOSA_T: &str = "z1^30+z2^30+522z1^25z2^5-522z1^5z2^25-10005z1^20z2^10-10005z1^10z2^20";

/// Sample points for the numeric inversion law.
pub const INVERSION_POINTS: [(f64, f64); 2] = [(0.0, 1.0), (0.3, 0.8)];

/// Which normalization the singularity checks use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// The stated constants.
    Stated,
    /// Constants re-derived from the series themselves.
    Derived,
}

/// Modular forms on the order-13 grid.
struct Forms13 {
    delta: ZSeries,
    e4: ZSeries,
    e6: ZSeries,
    eta8: ZSeries,
    j: ZSeries,
}

/// Lazily built contexts shared by all suites of one run.
pub struct Verifier {
    cfg: VerifyConfig,
    inv: OnceLock<InvariantContext>,
    theta: OnceLock<ThetaSystem>,
    forms: OnceLock<Forms13>,
}

fn compare(name: String, lhs: &QSeries, rhs: &QSeries, target_prec: i64, order: u32) -> CheckResult {
    let prec = lhs.prec().min(rhs.prec());
    if prec < target_prec {
        return CheckResult::new(
            name,
            false,
            format!("series known only below {}", format_exponent(prec, lhs.den())),
        );
    }
    let l = lhs.truncate(target_prec);
    let r = rhs.truncate(target_prec);
    match l.first_difference(&r) {
        None => CheckResult::new(name, true, format!("verified to order {order}")),
        Some((e, a, b)) => CheckResult::new(
            name,
            false,
            format!("first difference at {}: {} vs {}", format_exponent(e, lhs.den()), a, b),
        ),
    }
}

/// c with `raw = c · target` on the lowest coefficient of `target`.
fn leading_ratio(raw: &QSeries, target: &QSeries) -> Option<Rational> {
    let (e, t) = target.leading()?;
    Some(raw.coeff(e) / t)
}

fn describe_constant(c: &Rational) -> String {
    let k = c / Rational::from_integer(13.into());
    if k.is_integer() {
        let sign = if k.is_negative() { "-" } else { "" };
        format!("{sign}13*{}", k.abs())
    } else {
        c.to_string()
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-9..=9);
    let mut den: i64 = 0;
    while den == 0 {
        den = rng.gen_range(-9..=9);
    }
    Rational::new(num.into(), den.into())
}

fn format_tuple(params: &[Rational]) -> String {
    params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

impl Verifier {
    pub fn new(cfg: VerifyConfig) -> Result<Self, VerifyError> {
        cfg.validate()?;
        Ok(Verifier { cfg, inv: OnceLock::new(), theta: OnceLock::new(), forms: OnceLock::new() })
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.cfg
    }

    pub fn invariant_context(&self) -> &InvariantContext {
        self.inv.get_or_init(InvariantContext::new)
    }

    /// Series context with one order of margin.
    fn deep13(&self) -> SeriesContext {
        SeriesContext::order13(self.cfg.order + 1)
    }

    fn target_prec13(&self) -> i64 {
        SeriesContext::order13(self.cfg.order).prec()
    }

    pub fn theta_system(&self) -> &ThetaSystem {
        self.theta
            .get_or_init(|| ThetaSystem::new(self.deep13()).expect("order-13 grid supports every theta and eta"))
    }

    fn forms13(&self) -> &Forms13 {
        self.forms.get_or_init(|| {
            let ctx = self.deep13();
            let eta = eta_series(ctx).expect("grid supports eta");
            Forms13 {
                delta: eta.pow(24),
                eta8: eta.pow(8),
                e4: eisenstein(4, ctx).expect("weight 4"),
                e6: eisenstein(6, ctx).expect("weight 6"),
                j: j_series(ctx).expect("delta has unit leading coefficient"),
            }
        })
    }

    pub fn target_series(&self, t: Target) -> QSeries {
        let f = self.forms13();
        let ctx = self.deep13();
        let s = match t {
            Target::Zero => QExp::zero(ctx.den, ctx.prec()),
            Target::Delta => f.delta.clone(),
            Target::DeltaE6 => f.delta.mul(&f.e6),
            Target::Eta8DeltaE4 => f.eta8.mul(&f.delta).mul(&f.e4),
            Target::Delta2E6 => f.delta.pow(2).mul(&f.e6),
            Target::Eta8Delta2E4 => f.eta8.mul(&f.delta.pow(2)).mul(&f.e4),
            Target::Delta3E6 => f.delta.pow(3).mul(&f.e6),
            Target::Eta8Delta3E4 => f.eta8.mul(&f.delta.pow(3)).mul(&f.e4),
        };
        to_rational(&s)
    }

    /// Un-normalized Φ_{m,n}(x).
    pub fn raw_on_x(&self, m: u32, n: u32) -> QSeries {
        to_rational(&self.theta_system().power_sum_on_x(m, n))
    }

    /// Φ_{m,n}(x) with the stated normalization (1 where none is stated).
    pub fn stated_on_x(&self, m: u32, n: u32) -> QSeries {
        self.raw_on_x(m, n).scale(&InvariantSpec::stated(m, n).normalization)
    }

    fn compare13(&self, name: String, lhs: &QSeries, rhs: &QSeries) -> CheckResult {
        compare(name, lhs, rhs, self.target_prec13(), self.cfg.order)
    }

    fn identification(&self, m: u32, n: u32, t: Target, anchor_name: &str) -> CheckResult {
        timed(|| {
            let name = match normalization_entry(m, n) {
                Some(e) => format!(
                    "{}(x) = {} with normalization {}1/(13*{})",
                    phi_label(m, n),
                    t.label(),
                    if e.sign < 0 { "-" } else { "" },
                    e.k
                ),
                None => format!("{}(x) = {}", phi_label(m, n), t.label()),
            };
            let r = self.compare13(name, &self.stated_on_x(m, n), &self.target_series(t));
            let r = match normalization_entry(m, n) {
                Some(e) => r.cite(e.anchor),
                None => r,
            };
            anchored(r, anchor_name)
        })
    }

    /// The constant c with raw Φ(x) = c · target, and whether the whole
    /// series is that multiple.
    pub fn derived_constant(&self, m: u32, n: u32, t: Target) -> (Option<Rational>, CheckResult) {
        let raw = self.raw_on_x(m, n);
        let target = self.target_series(t);
        let name = format!("derived constant: {}(x) / ({})", phi_label(m, n), t.label());
        match leading_ratio(&raw, &target) {
            None => (None, CheckResult::new(name, false, "target series vanishes")),
            Some(c) => {
                let r = self.compare13(name, &raw, &target.scale(&c));
                let stated = normalization_entry(m, n)
                    .map(|e| format!("; stated {}13*{}", if e.sign < 0 { "-" } else { "" }, e.k))
                    .unwrap_or_default();
                let witness = if r.passed() {
                    format!("raw = {} times target, {}{stated}", describe_constant(&c), r.witness)
                } else {
                    r.witness.clone()
                };
                (Some(c), CheckResult { witness, ..r })
            }
        }
    }

    // ---- group ----

    pub fn group_relation_checks(&self) -> Vec<CheckResult> {
        let ctx = self.invariant_context();
        let mut out: Vec<CheckResult> =
            timed_all(|| verify_relations(&ctx.gens)).into_iter().map(|r| anchored(r, anchor::GROUP)).collect();
        out.push(timed(|| {
            let r = match generate_group(&[ctx.gens.s.clone(), ctx.gens.t.clone()], 10_000) {
                Ok(g) => CheckResult::new("order of <S, T> is 2184", g.order() == 2184, format!("{} elements", g.order())),
                Err(e) => CheckResult::new("order of <S, T> is 2184", false, e.to_string()),
            };
            anchored(r.cite("order of the group"), anchor::GROUP)
        }));
        out
    }

    pub fn word_element_checks(&self) -> Vec<CheckResult> {
        let ctx = self.invariant_context();
        let mut out: Vec<CheckResult> = timed_all(|| {
            let w = build_word_elements(&ctx.gens);
            verify_word_elements(&ctx.gens, &w)
        })
        .into_iter()
        .map(|r| anchored(r, anchor::WORD))
        .collect();
        out.extend(
            timed_all(|| verify_lift(&lift_word_2x2()))
            .into_iter()
            .map(|r| anchored(r, anchor::WORD)),
        );
        out
    }

    /// Order of ⟨H, T⟩, reported alongside the word checks.
    pub fn h_t_subgroup_check(&self) -> CheckResult {
        timed(|| {
            let ctx = self.invariant_context();
            let r = match generate_group(&[ctx.h(), ctx.gens.t.clone()], 10_000) {
                Ok(g) => CheckResult::new("order of <H, T> is 156", g.order() == 156, format!("{} elements", g.order())),
                Err(e) => CheckResult::new("order of <H, T> is 156", false, e.to_string()),
            };
            anchored(r, anchor::WORD)
        })
    }

    // ---- forms ----

    pub fn transformation_checks(&self) -> Vec<CheckResult> {
        let ctx = self.invariant_context();
        let mut out = Vec::new();
        for nu in 0..13 {
            out.push(timed(|| anchored(verify_a_transformation(ctx, nu), anchor::TRANSFORM)));
        }
        out.push(timed(|| match resolve_radicals(ctx) {
            Ok((_, flips)) => {
                let flipped: Vec<String> =
                    (0..4).filter(|&k| flips[k]).map(|k| format!("r{}", k + 1)).collect();
                anchored(
                    CheckResult::new(
                        "consistent branch assignment for r1..r4",
                        true,
                        if flipped.is_empty() {
                            "r2 = theta1-theta3, r4 = theta2-theta4, r1 = r2+r4, r3 = r4-r2; no flips".to_string()
                        } else {
                            format!("flipped {}", flipped.join(", "))
                        },
                    ),
                    anchor::TRANSFORM,
                )
            }
            Err(e) => anchored(CheckResult::new("consistent branch assignment for r1..r4", false, e.to_string()), anchor::TRANSFORM),
        }));
        if let Ok((rad, _)) = resolve_radicals(ctx) {
            for nu in 0..13 {
                out.extend(
                    timed_all(|| verify_d_transformation(ctx, &rad, nu))
                        .into_iter()
                        .map(|r| anchored(r, anchor::TRANSFORM)),
                );
            }
        }
        for nu in 0..13 {
            out.push(timed(|| anchored(verify_g_transformation(ctx, nu), anchor::TRANSFORM)));
        }
        out
    }

    /// The quadratic law with every ζ-exponent shifted must fail.
    pub fn transformation_negative_control(&self) -> CheckResult {
        timed(|| {
            let ctx = self.invariant_context();
            let rhs = a_transformation_rhs(&ctx.forms, 2, 1);
            let inner = verify_a_against(ctx, 2, &rhs);
            anchored(
                CheckResult::new(
                    "negative control: shifted quadratic law is rejected",
                    !inner.passed(),
                    format!("shifted law: {}", inner.witness),
                ),
                anchor::TRANSFORM,
            )
        })
    }

    pub fn leading_term_checks(&self) -> Vec<CheckResult> {
        let sys = self.theta_system();
        let den = sys.ctx.den;
        let check = |label: String, s: &ZSeries, num: i64, d: i64, c: i64| {
            let want_e = num * den / d;
            let got = s.leading().map(|(e, v)| (e, v.clone()));
            let ok = got == Some((want_e, BigInt::from(c)));
            let witness = match got {
                Some((e, v)) => format!("{}({} + O(q))", format_exponent(e, den), v),
                None => "series vanishes".to_string(),
            };
            anchored(CheckResult::new(format!("leading term of {label}"), ok, witness), anchor::LEADING)
        };
        let mut out = Vec::new();
        for &(i, num, d, c) in &A_LEADING {
            out.push(timed(|| check(format!("A{i}"), &sys.a_forms[i], num, d, c)));
        }
        for &(i, num, d, c) in &D_LEADING {
            let label = if i == INF { "Dinf".to_string() } else { format!("D{i}") };
            out.push(timed(|| check(label, &sys.d_forms[i], num, d, c)));
        }
        for &(i, num, d, c) in &G_LEADING {
            out.push(timed(|| check(format!("G{i}"), &sys.g_forms[i], num, d, c)));
        }
        for &(label, terms, num, d, c) in &A_PRODUCT_LEADING {
            out.push(timed(|| {
                let mut acc = QExp::zero(den, sys.ctx.prec());
                for &(k, i, j) in terms {
                    acc = acc.add(&sys.a_forms[i].mul(&sys.a_forms[j]).scale_int(k));
                }
                check(label.to_string(), &acc, num, d, c)
            }));
        }
        out
    }

    // ---- invariance ----

    pub fn phi01_zero_check(&self) -> CheckResult {
        timed(|| {
            let r = match build_invariant_symbolic(self.invariant_context(), &InvariantSpec::raw(0, 1), 30) {
                Ok(p) => CheckResult::new(
                    "Phi_{0,1} is the zero polynomial",
                    p.is_zero(),
                    if p.is_zero() { "0".to_string() } else { format!("{} nonzero terms", p.len()) },
                ),
                Err(e) => CheckResult::new("Phi_{0,1} is the zero polynomial", false, e.to_string()),
            };
            anchored(r, anchor::INVARIANCE)
        })
    }

    pub fn permutation_checks(&self) -> Vec<CheckResult> {
        let ctx = self.invariant_context();
        let h = ctx.h();
        [("S", &ctx.gens.s), ("T", &ctx.gens.t), ("H", &h)]
            .into_iter()
            .map(|(name, g)| {
                timed(|| {
                    let label = format!("{name} permutes the fourteen points");
                    let r = match compute_group_permutation(ctx, g) {
                        Ok(p) => {
                            let minus = p.phi_signs.iter().filter(|&&s| s < 0).count();
                            CheckResult::new(
                                label,
                                true,
                                format!("sigma = {p}, cycle type {:?}, {minus} sign changes on phi", p.cycle_type()),
                            )
                        }
                        Err(e) => CheckResult::new(label, false, e.to_string()),
                    };
                    anchored(r, anchor::INVARIANCE)
                })
            })
            .collect()
    }

    /// Exact symbolic invariance at degrees 4 and 12.
    pub fn symbolic_invariance_checks(&self) -> Vec<CheckResult> {
        let ctx = self.invariant_context();
        let mut out = Vec::new();
        for (m, n) in [(1, 0), (3, 0), (0, 2)] {
            out.extend(
                timed_all(|| match build_invariant(ctx, InvariantSpec::stated(m, n), Strategy::Symbolic, self.cfg.degree_budget) {
                    Ok(h) => verify_invariance(ctx, &h, InvarianceMode::Symbolic),
                    Err(e) => vec![CheckResult::new(format!("invariance of {}", phi_label(m, n)), false, e.to_string())],
                })
                .into_iter()
                .map(|r| anchored(r, anchor::INVARIANCE)),
            );
        }
        out
    }

    /// Exact invariance at seeded integer points for a degree-30 sum.
    pub fn sampled_invariance_checks(&self) -> Vec<CheckResult> {
        let ctx = self.invariant_context();
        let samples = (4 * self.cfg.draws).max(20);
        timed_all(|| match build_invariant(ctx, InvariantSpec::stated(3, 3), Strategy::Sampled, self.cfg.degree_budget) {
            Ok(h) => verify_invariance(ctx, &h, InvarianceMode::Points { samples, seed: self.cfg.seed }),
            Err(e) => vec![CheckResult::new("sampled invariance", false, e.to_string())],
        })
        .into_iter()
        .map(|r| anchored(r, anchor::INVARIANCE))
        .collect()
    }

    // ---- modular ----

    pub fn core_identification_checks(&self) -> Vec<CheckResult> {
        let mut out: Vec<CheckResult> = CORE_IDENTIFICATIONS
            .iter()
            .map(|&(m, n, t)| self.identification(m, n, t, anchor::CORE))
            .collect();
        out.extend(self.eta_multiple_checks());
        out
    }

    /// Φ_{5,0} on y = η³a and Φ_{2,2} on u = η⁹a.
    pub fn eta_multiple_checks(&self) -> Vec<CheckResult> {
        let sys = self.theta_system();
        let f = self.forms13();
        let mut out = Vec::new();
        out.push(timed(|| {
            let lhs = to_rational(&sys.power_sum_on_eta_multiple(5, 0, 3));
            let rhs = to_rational(&f.delta.pow(3).mul(&f.e4).scale_int(13 * 25));
            anchored(self.compare13("Phi_{5,0}(y) = 13*25 Delta^3 E4".into(), &lhs, &rhs).cite("normalization of degree-20 power sums"), anchor::CORE)
        }));
        out.push(timed(|| {
            let lhs = to_rational(&sys.power_sum_on_eta_multiple(2, 2, 9));
            let rhs = to_rational(&f.delta.pow(8).mul(&f.e4).scale_int(13 * 26));
            let r = self.compare13("Phi_{2,2}(u) = 13*26 Delta^8 E4".into(), &lhs, &rhs);
            let lead = lhs.leading().map(|(e, c)| format!("{}({c} + O(q))", format_exponent(e, lhs.den())));
            let witness = format!("{}; leading {}", r.witness, lead.unwrap_or_else(|| "none".into()));
            anchored(CheckResult { witness, ..r }.cite("normalization of degree-20 power sums"), anchor::CORE)
        }));
        out
    }

    pub fn odd_identification_checks(&self) -> Vec<CheckResult> {
        ODD_IDENTIFICATIONS.iter().map(|&(m, n, t)| self.identification(m, n, t, anchor::ODD)).collect()
    }

    pub fn high_identification_checks(&self) -> Vec<CheckResult> {
        HIGH_IDENTIFICATIONS.iter().map(|&(m, n, t)| self.identification(m, n, t, anchor::HIGH)).collect()
    }

    /// Solves raw Φ(x) = c₁ η⁸Δ²E₄⁴ + c₂ η⁸Δ²E₄E₆² from the two lowest
    /// coefficients and verifies the rest.
    pub fn membership_checks(&self) -> Vec<CheckResult> {
        let f = self.forms13();
        let base = f.eta8.mul(&f.delta.pow(2));
        let b1 = to_rational(&base.mul(&f.e4.pow(4)));
        let b2 = to_rational(&base.mul(&f.e4).mul(&f.e6.pow(2)));
        MEMBERSHIP
            .iter()
            .map(|&(m, n)| {
                timed(|| {
                    let name = format!("{}(x) in eta^8 Delta^2 (C E4^4 + C E4 E6^2)", phi_label(m, n));
                    let raw = self.raw_on_x(m, n);
                    let v = b1.valuation();
                    let step = b1.den();
                    let (p0, p1) = (b1.coeff(v), b1.coeff(v + step));
                    let (q0, q1) = (b2.coeff(v), b2.coeff(v + step));
                    let (r0, r1) = (raw.coeff(v), raw.coeff(v + step));
                    let det = &p0 * &q1 - &p1 * &q0;
                    let r = if det.is_zero() {
                        CheckResult::new(name, false, "singular 2x2 system")
                    } else {
                        let c1 = (&r0 * &q1 - &r1 * &q0) / &det;
                        let c2 = (&p0 * &r1 - &p1 * &r0) / &det;
                        let rhs = b1.scale(&c1).add(&b2.scale(&c2));
                        let r = self.compare13(name, &raw, &rhs);
                        let witness = format!("(c1, c2) = ({c1}, {c2}); {}", r.witness);
                        CheckResult { witness, ..r }
                    };
                    anchored(r, anchor::HIGH)
                })
            })
            .collect()
    }

    /// Re-derived constants for every identification with a nonzero target.
    pub fn derived_constant_checks(&self) -> Vec<CheckResult> {
        let groups: [(&[Identification], &str); 3] = [
            (&CORE_IDENTIFICATIONS, anchor::CORE),
            (&ODD_IDENTIFICATIONS, anchor::ODD),
            (&HIGH_IDENTIFICATIONS, anchor::HIGH),
        ];
        let mut out = Vec::new();
        for (list, a) in groups {
            for &(m, n, t) in list.iter().filter(|x| x.2 != Target::Zero) {
                out.push(timed(|| anchored(self.derived_constant(m, n, t).1, a)));
            }
        }
        out
    }

    pub fn vanishing_checks(&self) -> Vec<CheckResult> {
        let mut out: Vec<CheckResult> = VANISHING_GENERATORS
            .iter()
            .map(|&(m, n)| {
                timed(|| {
                    let zero = self.target_series(Target::Zero);
                    anchored(
                        self.compare13(format!("{}(x) = 0", phi_label(m, n)), &self.raw_on_x(m, n), &zero),
                        anchor::VANISHING,
                    )
                })
            })
            .collect();
        out.push(self.vanishing_negative_control());
        out
    }

    /// Φ_{1,0} at a seeded integer point off the curve is nonzero.
    pub fn vanishing_negative_control(&self) -> CheckResult {
        timed(|| {
            let ctx = self.invariant_context();
            let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
            let x = random_point(&mut rng);
            let r = match build_invariant_symbolic(ctx, &InvariantSpec::raw(1, 0), self.cfg.degree_budget) {
                Ok(p) => {
                    let v = p.evaluate(&x);
                    CheckResult::new(
                        "negative control: Phi_{1,0} is nonzero off the curve",
                        !v.is_zero(),
                        format!(
                            "Phi_{{1,0}}({}) = {v}",
                            x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                        ),
                    )
                }
                Err(e) => CheckResult::new("negative control: Phi_{1,0} is nonzero off the curve", false, e.to_string()),
            };
            anchored(r, anchor::VANISHING)
        })
    }

    // ---- singularities ----

    fn constant_for(&self, m: u32, n: u32, t: Target, norm: Normalization) -> Rational {
        match norm {
            Normalization::Stated => InvariantSpec::stated(m, n).normalization,
            Normalization::Derived => match self.derived_constant(m, n, t).0 {
                Some(c) if !c.is_zero() => c.recip(),
                _ => Rational::zero(),
            },
        }
    }

    fn normalized_series(&self, m: u32, n: u32, norm: Normalization) -> QSeries {
        let t = CORE_IDENTIFICATIONS
            .iter()
            .chain(HIGH_IDENTIFICATIONS.iter())
            .find(|x| x.0 == m && x.1 == n)
            .map_or(Target::Zero, |x| x.2);
        self.raw_on_x(m, n).scale(&self.constant_for(m, n, t, norm))
    }

    fn family_series(&self, family: Family, params: &[Rational], norm: Normalization) -> Result<Vec<QSeries>, VerifyError> {
        let combos = build_parametrized(family, params)?;
        let ctx = self.deep13();
        Ok(combos
            .iter()
            .map(|c| {
                c.combine(
                    |m, n| self.normalized_series(m, n, norm),
                    |s, k| s.scale(k),
                    |a, b| a.add(b),
                    QExp::zero(ctx.den, ctx.prec()),
                )
            })
            .collect())
    }

    /// `draws` seeded rational tuples, one stream per family.
    pub fn parameter_tuples(&self, family: Family) -> Vec<Vec<Rational>> {
        let (len, stream) = match family {
            Family::E8 => (4, 0),
            Family::Q18E20 => (6, 1),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(stream);
        (0..self.cfg.draws).map(|_| (0..len).map(|_| random_rational(&mut rng)).collect()).collect()
    }

    pub fn e8_checks(&self, norm: Normalization) -> Vec<CheckResult> {
        let suffix = match norm {
            Normalization::Stated => "",
            Normalization::Derived => " (derived normalization)",
        };
        let f = self.forms13();
        let j = to_rational(&f.j);
        let j1728 = j.sub(&QExp::one(j.den(), j.prec()).scale_int(1728));
        let mut out = Vec::new();
        for params in self.parameter_tuples(Family::E8) {
            let tag = format_tuple(&params);
            match self.family_series(Family::E8, &params, norm) {
                Ok(s) => {
                    let (p12, p20, p30) = (&s[0], &s[1], &s[2]);
                    let p12_5 = p12.pow(5);
                    let p20_3 = p20.pow(3);
                    let p30_2 = p30.pow(2);
                    out.push(timed(|| {
                        let lhs = p20_3.sub(&p30_2).sub(&p12_5.scale_int(1728));
                        let zero = QExp::zero(lhs.den(), lhs.prec());
                        anchored(self.compare13(format!("E8: Phi20^3 - Phi30^2 - 1728 Phi12^5 = 0 at ({tag}){suffix}"), &lhs, &zero), anchor::E8)
                    }));
                    out.push(timed(|| {
                        anchored(self.compare13(format!("j Phi12^5 = Phi20^3 at ({tag}){suffix}"), &j.mul(&p12_5), &p20_3), anchor::E8)
                    }));
                    out.push(timed(|| {
                        anchored(
                            self.compare13(format!("(j - 1728) Phi12^5 = Phi30^2 at ({tag}){suffix}"), &j1728.mul(&p12_5), &p30_2),
                            anchor::E8,
                        )
                    }));
                }
                Err(e) => out.push(anchored(CheckResult::new(format!("E8 family at ({tag})"), false, e.to_string()), anchor::E8)),
            }
        }
        out
    }

    pub fn q18e20_checks(&self, norm: Normalization) -> Vec<CheckResult> {
        let suffix = match norm {
            Normalization::Stated => "",
            Normalization::Derived => " (derived normalization)",
        };
        let mut out = Vec::new();
        for params in self.parameter_tuples(Family::Q18E20) {
            let tag = format_tuple(&params);
            match self.family_series(Family::Q18E20, &params, norm) {
                Ok(s) => {
                    let (p12, p32, p42, p44) = (&s[0], &s[1], &s[2], &s[3]);
                    let p42_2 = p42.pow(2);
                    out.push(timed(|| {
                        let lhs = p32.pow(3).sub(&p12.mul(&p42_2)).sub(&p12.pow(8).scale_int(1728));
                        let zero = QExp::zero(lhs.den(), lhs.prec());
                        anchored(
                            self.compare13(format!("Q18: Phi32^3 - Phi12 Phi42^2 - 1728 Phi12^8 = 0 at ({tag}){suffix}"), &lhs, &zero),
                            anchor::Q18E20,
                        )
                    }));
                    out.push(timed(|| {
                        let lhs = p44.pow(3).sub(&p12.pow(4).mul(&p42_2)).sub(&p12.pow(11).scale_int(1728));
                        let zero = QExp::zero(lhs.den(), lhs.prec());
                        anchored(
                            self.compare13(format!("E20: Phi44^3 - Phi12^4 Phi42^2 - 1728 Phi12^11 = 0 at ({tag}){suffix}"), &lhs, &zero),
                            anchor::Q18E20,
                        )
                    }));
                }
                Err(e) => out.push(anchored(CheckResult::new(format!("Q18/E20 family at ({tag})"), false, e.to_string()), anchor::Q18E20)),
            }
        }
        out
    }

    // ---- icosahedral ----

    fn icosa_polys() -> (MPoly, MPoly, MPoly) {
        let p = |s: &str| MPoly::parse(s).expect("built-in binary form parses");
        (p(ICOSA_F), p(ICOSA_H), p(ICOSA_T))
    }

    fn det2(a: &MPoly, b: &MPoly, c: &MPoly, d: &MPoly) -> MPoly {
        a.mul(d).sub(&b.mul(c))
    }

    /// Polynomial identities and the determinant constructions.
    pub fn icosahedral_polynomial_checks(&self) -> Vec<CheckResult> {
        let (f, h, t) = Self::icosa_polys();
        let mut out = Vec::new();
        out.push(timed(|| {
            let lhs = t.pow(2).add(&h.pow(3)).sub(&f.pow(5).scale_int(1728));
            CheckResult::new("T^2 + H^3 = 1728 f^5", lhs.is_zero(), if lhs.is_zero() { "exact polynomial identity".into() } else { format!("{} residual terms", lhs.len()) })
        }));
        out.push(timed(|| {
            let hess = Self::det2(&f.derivative(0).derivative(0), &f.derivative(0).derivative(1), &f.derivative(1).derivative(0), &f.derivative(1).derivative(1));
            let scaled = hess.scale_rational(&Rational::new(1.into(), 121.into()));
            CheckResult::new("H = (1/121) Hessian(f)", scaled == h, Self::sign_witness(&scaled, &h))
        }));
        out.push(timed(|| {
            let jac = self.jacobian(&f, &h);
            let scaled = jac.scale_rational(&Rational::new((-1).into(), 20.into()));
            CheckResult::new("T = -(1/20) Jacobian(f, H)", scaled == t, Self::sign_witness(&scaled, &t))
        }));
        out.into_iter().map(|r| anchored(r, anchor::ICOSAHEDRAL)).collect()
    }

    fn jacobian(&self, f: &MPoly, h: &MPoly) -> MPoly {
        Self::det2(&f.derivative(0), &f.derivative(1), &h.derivative(0), &h.derivative(1))
    }

    fn sign_witness(got: &MPoly, want: &MPoly) -> String {
        if got == want {
            "construction reproduces the displayed form".into()
        } else if *got == want.neg() {
            "construction gives -1 times the displayed form".into()
        } else {
            format!("{} differing terms", got.sub(want).len())
        }
    }

    /// The opposite sign of the Jacobian scaling, reported separately.
    pub fn icosahedral_jacobian_sign_check(&self) -> CheckResult {
        timed(|| {
            let (f, h, t) = Self::icosa_polys();
            let scaled = self.jacobian(&f, &h).scale_rational(&Rational::new(1.into(), 20.into()));
            anchored(
                CheckResult::new("T = +(1/20) Jacobian(f, H) (derived sign)", scaled == t, Self::sign_witness(&scaled, &t)),
                anchor::ICOSAHEDRAL,
            )
        })
    }

    /// f, H, T on (η·a, η·b) and the two j-relations.
    pub fn icosahedral_series_checks(&self) -> Vec<CheckResult> {
        let ctx = SeriesContext::order5(self.cfg.order + 1);
        let target = SeriesContext::order5(self.cfg.order).prec();
        let built = (|| -> Result<_, SeriesError> {
            let [a, b] = theta_pair5(ctx)?;
            let eta = eta_series(ctx)?;
            let delta = eta.pow(24);
            let e4 = eisenstein(4, ctx)?;
            let e6 = eisenstein(6, ctx)?;
            let j = j_series(ctx)?;
            Ok((eta.mul(&a), eta.mul(&b), eta, delta, e4, e6, j))
        })();
        let (x1, x2, eta, delta, e4, e6, j) = match built {
            Ok(v) => v,
            Err(e) => return vec![anchored(CheckResult::new("order-5 series", false, e.to_string()), anchor::ICOSAHEDRAL)],
        };
        let zero = QExp::zero(ctx.den, ctx.prec());
        let vars = [x1, x2, zero.clone(), zero.clone(), zero.clone(), zero];
        let (f, h, t) = Self::icosa_polys();
        let on_x = |p: &MPoly| to_rational(&evaluate_zpoly_on_series(&ZPoly::from_mpoly(p).expect("integral"), &vars));
        let cmp = |name: &str, l: &QSeries, r: &QSeries| anchored(compare(name.to_string(), l, r, target, self.cfg.order), anchor::ICOSAHEDRAL);
        let fx = on_x(&f);
        let hx = on_x(&h);
        let tx = on_x(&t);
        let delta_q = to_rational(&delta);
        let jq = to_rational(&j);
        vec![
            timed(|| cmp("f(x1, x2) = -Delta", &fx, &delta_q.neg())),
            timed(|| cmp("H(x1, x2) = -eta^8 Delta E4", &hx, &to_rational(&eta.pow(8).mul(&delta).mul(&e4)).neg())),
            timed(|| cmp("T(x1, x2) = Delta^2 E6", &tx, &to_rational(&delta.pow(2).mul(&e6)))),
            timed(|| cmp("j f^5 = H^3", &jq.mul(&fx.pow(5)), &hx.pow(3))),
            timed(|| {
                let j1728 = jq.sub(&QExp::one(jq.den(), jq.prec()).scale_int(1728));
                cmp("(j - 1728) f^5 = -T^2", &j1728.mul(&fx.pow(5)), &tx.pow(2).neg())
            }),
        ]
    }

    // ---- theta ----

    pub fn translation_checks(&self) -> Vec<CheckResult> {
        let ctx = SeriesContext::order13(self.cfg.order);
        let a = match theta_vector13(ctx) {
            Ok(a) => a,
            Err(e) => return vec![anchored(CheckResult::new("theta vector", false, e.to_string()), anchor::THETA)],
        };
        a.iter()
            .enumerate()
            .map(|(i, s)| {
                timed(|| {
                    let want = (65 + 8 * T_EXPONENTS[i]).rem_euclid(104);
                    let got = s.residue_class(104, 104);
                    anchored(
                        CheckResult::new(
                            format!("translation phase of a{} (char {}/13)", i + 1, THETA13_CHARS[i]),
                            got == Some(want),
                            match got {
                                Some(c) => format!("exponent class {c} mod 104, expected {want}"),
                                None => format!("exponents in several classes mod 104, expected {want}"),
                            },
                        )
                        .cite("theta vector under z -> z+1"),
                        anchor::THETA,
                    )
                })
            })
            .collect()
    }

    pub fn inversion_checks(&self) -> Vec<CheckResult> {
        let s = &self.invariant_context().gens.s;
        INVERSION_POINTS
            .iter()
            .map(|&(re, im)| timed(|| anchored(verify_inversion_law(s, Complex64::new(re, im), 1e-9), anchor::THETA)))
            .collect()
    }

    // ---- suites ----

    pub fn run_suite(&self, suite: Suite) -> Vec<CheckResult> {
        match suite {
            Suite::Group => {
                let mut v = self.group_relation_checks();
                v.extend(self.word_element_checks());
                v.push(self.h_t_subgroup_check());
                v
            }
            Suite::Forms => {
                let mut v = self.transformation_checks();
                v.push(self.transformation_negative_control());
                v.extend(self.leading_term_checks());
                v
            }
            Suite::Invariance => {
                let mut v = vec![self.phi01_zero_check()];
                v.extend(self.permutation_checks());
                v.extend(self.symbolic_invariance_checks());
                v.extend(self.sampled_invariance_checks());
                v
            }
            Suite::Modular => {
                let mut v = self.core_identification_checks();
                v.extend(self.odd_identification_checks());
                v.extend(self.high_identification_checks());
                v.extend(self.membership_checks());
                v.extend(self.derived_constant_checks());
                v.extend(self.vanishing_checks());
                v
            }
            Suite::Singularities => {
                let mut v = self.e8_checks(Normalization::Stated);
                v.extend(self.q18e20_checks(Normalization::Stated));
                v.extend(self.e8_checks(Normalization::Derived));
                v.extend(self.q18e20_checks(Normalization::Derived));
                v
            }
            Suite::Icosahedral => {
                let mut v = self.icosahedral_polynomial_checks();
                v.push(self.icosahedral_jacobian_sign_check());
                v.extend(self.icosahedral_series_checks());
                v
            }
            Suite::Theta => {
                let mut v = self.translation_checks();
                v.extend(self.inversion_checks());
                v
            }
        }
    }

    pub fn run(&self, suites: &[Suite]) -> Report {
        let mut checks = Vec::new();
        for &s in suites {
            checks.extend(self.run_suite(s));
        }
        Report::new(&self.cfg, suites, checks)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub order: u32,
    pub degree_budget: u32,
    pub seed: u64,
    pub draws: usize,
    pub suites: Vec<Suite>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub parameters: Parameters,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(cfg: &VerifyConfig, suites: &[Suite], checks: Vec<CheckResult>) -> Self {
        Report {
            version: REPORT_VERSION.to_string(),
            parameters: Parameters {
                order: cfg.order,
                degree_budget: cfg.degree_budget,
                seed: cfg.seed,
                draws: cfg.draws,
                suites: suites.to_vec(),
                note: format!("series identities verified to order {}", cfg.order),
            },
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == crate::report::Status::Fail)
    }

    /// The same report with every timing zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.millis = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// One table per result, in order of first appearance.
    pub fn to_markdown(&self) -> String {
        let p = &self.parameters;
        let mut out = String::new();
        let _ = writeln!(out, "# Verification report (version {})\n", self.version);
        let _ = writeln!(
            out,
            "order {}, degree budget {}, seed {}, draws {}; {}\n",
            p.order, p.degree_budget, p.seed, p.draws, p.note
        );
        let pass = self.checks.iter().filter(|c| c.passed()).count();
        let _ = writeln!(out, "{pass} of {} checks passed.\n", self.checks.len());
        let mut sections: Vec<&str> = Vec::new();
        for c in &self.checks {
            let s = c.citations.first().map_or("other", String::as_str);
            if !sections.contains(&s) {
                sections.push(s);
            }
        }
        for s in sections {
            let _ = writeln!(out, "## {s}\n");
            let _ = writeln!(out, "| check | status | witness | ms |");
            let _ = writeln!(out, "|---|---|---|---|");
            for c in self.checks.iter().filter(|c| c.citations.first().map_or("other", String::as_str) == s) {
                let status = match c.status {
                    crate::report::Status::Pass => "pass",
                    crate::report::Status::Fail => "FAIL",
                    crate::report::Status::Skipped => "skipped",
                };
                let _ = writeln!(out, "| {} | {} | {} | {} |", md_escape(&c.name), status, md_escape(&c.witness), c.millis);
            }
            out.push('\n');
        }
        out
    }
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}
