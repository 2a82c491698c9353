//! Form families, the fourteen-point system and the invariants Φ_{m,n}.
//!
//! Indices 0..=12 address the finite points and [`INF`] the point at infinity.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclofield::{gauss_sqrt13, periods_and_radicals, CycloElem, CycloError, Radicals, Rational};
use crate::grouprep::{build_generators, build_word_elements, GMatrix, Generators};
use crate::polyring::{MPoly, PolyError, ZPoly};
use crate::report::CheckResult;

pub const INF: usize = 13;
pub const POINTS: usize = 14;

/// ζ-exponent multiplying A_k in φ_ν, as a multiple of ν.
pub const PHI_EXPONENTS: [i64; 7] = [0, 1, 4, 9, 3, 12, 10];

const A_TEXT: [&str; 7] = [
    "z1z4+z2z5+z3z6",
    "z1^2-2z3z4",
    "-z5^2-2z2z4",
    "z2^2-2z1z5",
    "z3^2-2z2z6",
    "-z4^2-2z1z6",
    "-z6^2-2z3z5",
];

const D_TEXT: [&str; 14] = [
    "z1z2z3",
    "2z2z3^2+z2^2z6-z4^2z5+z1z5z6",
    "-z6^3+z2^2z4-2z2z5^2+z1z4z5+3z3z5z6",
    "2z1z2^2+z1^2z5-z4z6^2+z3z4z5",
    "-z2^2z3+z1z6^2-2z4^2z6-z1z3z5",
    "-z4^3+z3^2z5-2z3z6^2+z2z5z6+3z1z4z6",
    "-z5^3+z1^2z6-2z1z4^2+z3z4z6+3z2z4z5",
    "-z2^3+z3z4^2-z1z3z6-3z1z2z5+2z1^2z4",
    "-z1^3+z2z6^2-z2z3z5-3z1z3z4+2z3^2z6",
    "2z1^2z3+z3^2z4-z5^2z6+z2z4z6",
    "-z1z3^2+z2z4^2-2z4z5^2-z1z2z6",
    "-z3^3+z1z5^2-z1z2z4-3z2z3z6+2z2^2z5",
    "-z1^2z2+z3z5^2-2z5z6^2-z2z3z4",
    "z4z5z6",
];

/// G_1..G_12 as sums of c·D_i·D_j.
pub const G_TERMS: [[(i64, usize, usize); 7]; 12] = [
    [(-1, 7, 7), (2, 0, 1), (10, INF, 1), (2, 2, 12), (-2, 3, 11), (-4, 4, 10), (-2, 9, 5)],
    [(-2, 1, 1), (-4, 0, 2), (6, INF, 2), (-2, 4, 11), (2, 5, 10), (-2, 6, 9), (-2, 7, 8)],
    [(-1, 8, 8), (2, 0, 3), (10, INF, 3), (2, 6, 10), (-2, 9, 7), (-4, 12, 4), (-2, 1, 2)],
    [(-1, 2, 2), (10, 0, 4), (-2, INF, 4), (2, 5, 12), (-2, 9, 8), (-4, 1, 3), (-2, 10, 7)],
    [(-2, 9, 9), (-4, 0, 5), (6, INF, 5), (-2, 10, 8), (2, 6, 12), (-2, 2, 3), (-2, 11, 7)],
    [(-2, 3, 3), (-4, 0, 6), (6, INF, 6), (-2, 12, 7), (2, 2, 4), (-2, 5, 1), (-2, 8, 11)],
    [(-2, 10, 10), (6, 0, 7), (4, INF, 7), (-2, 1, 6), (-2, 2, 5), (-2, 8, 12), (-2, 9, 11)],
    [(-2, 4, 4), (6, 0, 8), (4, INF, 8), (-2, 3, 5), (-2, 6, 2), (-2, 11, 10), (-2, 1, 7)],
    [(-1, 11, 11), (2, 0, 9), (10, INF, 9), (2, 5, 4), (-2, 1, 8), (-4, 10, 12), (-2, 3, 6)],
    [(-1, 5, 5), (10, 0, 10), (-2, INF, 10), (2, 6, 4), (-2, 3, 7), (-4, 9, 1), (-2, 12, 11)],
    [(-2, 12, 12), (6, 0, 11), (4, INF, 11), (-2, 9, 2), (-2, 5, 6), (-2, 7, 4), (-2, 3, 8)],
    [(-1, 6, 6), (10, 0, 12), (-2, INF, 12), (2, 2, 10), (-2, 1, 11), (-4, 3, 9), (-2, 4, 8)],
];

/// Radical coefficient pattern of the cubic transformation rows: entry k
/// (for D_k, k = 1..12) is (sign, radical index 1..=4).
const D0_ROW: [(i64, usize); 12] =
    [(1, 1), (1, 2), (1, 1), (1, 3), (1, 2), (1, 2), (1, 4), (1, 4), (1, 1), (1, 3), (1, 4), (1, 3)];
const DINF_ROW: [(i64, usize); 12] = [
    (-1, 3),
    (-1, 4),
    (-1, 3),
    (1, 1),
    (-1, 4),
    (-1, 4),
    (1, 2),
    (1, 2),
    (-1, 3),
    (1, 1),
    (1, 2),
    (1, 1),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("degree {degree} exceeds the symbolic degree budget {budget}")]
    BudgetExceeded { degree: u32, budget: u32 },
    #[error("family {family} expects {expected} parameters, got {got}")]
    ParamCount { family: &'static str, expected: usize, got: usize },
    #[error("group element does not permute the fourteen points: image of index {index} matches none")]
    NoPermutation { index: usize },
    #[error("no sign assignment of r1..r4 satisfies the cubic transformation law")]
    NoSignAssignment,
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Label of a point index.
pub fn point_label(i: usize) -> String {
    if i == INF {
        "inf".to_string()
    } else {
        i.to_string()
    }
}

#[derive(Clone, Debug)]
pub struct FormFamily {
    pub a: Vec<MPoly>,
    /// D_0..D_12 then D_∞ at index [`INF`].
    pub d: Vec<MPoly>,
    pub g: Vec<MPoly>,
}

fn parse_static(s: &str) -> MPoly {
    MPoly::parse(s).expect("built-in form text parses")
}

/// All 34 forms, with G_j expanded from the D-products.
pub fn build_forms() -> FormFamily {
    let a: Vec<MPoly> = A_TEXT.iter().map(|s| parse_static(s)).collect();
    let d: Vec<MPoly> = D_TEXT.iter().map(|s| parse_static(s)).collect();
    let g = g_from(&d);
    FormFamily { a, d, g }
}

/// φ_ν, w_ν = φ_ν² and δ_ν for ν in 0..=12 and ∞.
#[derive(Clone, Debug)]
pub struct FourteenPoints {
    pub phi: Vec<MPoly>,
    pub w: Vec<MPoly>,
    pub delta: Vec<MPoly>,
}

/// Σ_k ζ^{e_k ν} A_k.
pub fn phi_nu(forms: &FormFamily, nu: usize) -> MPoly {
    phi_from(&forms.a, nu)
}

fn phi_from(a: &[MPoly], nu: usize) -> MPoly {
    let mut acc = MPoly::zero();
    for (a, e) in a.iter().zip(PHI_EXPONENTS) {
        acc = acc.add(&a.scale(&CycloElem::zeta_power(e * nu as i64)));
    }
    acc
}

/// G_0..G_12 from the fourteen cubics.
fn g_from(d: &[MPoly]) -> Vec<MPoly> {
    let mut g = vec![d[0].pow(2).add(&d[INF].pow(2))];
    for terms in &G_TERMS {
        let mut acc = MPoly::zero();
        for &(c, i, j) in terms {
            acc = acc.add(&d[i].mul(&d[j]).scale_int(c));
        }
        g.push(acc);
    }
    g
}

/// −13 G_0 + Σ_k ζ^{kν} G_k.
pub fn delta_nu(forms: &FormFamily, nu: usize) -> MPoly {
    delta_from(&forms.g, nu)
}

fn delta_from(g: &[MPoly], nu: usize) -> MPoly {
    let mut acc = g[0].scale_int(-13);
    for (k, gk) in g.iter().enumerate().skip(1) {
        acc = acc.add(&gk.scale(&CycloElem::zeta_power((k * nu) as i64)));
    }
    acc
}

fn points_from(a: &[MPoly], g: &[MPoly]) -> FourteenPoints {
    let mut phi: Vec<MPoly> = (0..13).map(|nu| phi_from(a, nu)).collect();
    phi.push(a[0].scale(&gauss_sqrt13()));
    let w = phi.iter().map(|p| p.pow(2)).collect();
    let mut delta: Vec<MPoly> = (0..13).map(|nu| delta_from(g, nu)).collect();
    delta.push(g[0].scale_int(169));
    FourteenPoints { phi, w, delta }
}

pub fn build_fourteen_points(forms: &FormFamily) -> FourteenPoints {
    points_from(&forms.a, &forms.g)
}

/// Generators, forms and the fourteen-point system, built once.
#[derive(Clone, Debug)]
pub struct InvariantContext {
    pub gens: Generators,
    pub forms: FormFamily,
    pub points: FourteenPoints,
    /// S·T^ν for ν in 0..=12.
    pub st: Vec<GMatrix>,
    integral: IntegralPoints,
}

/// w_0, δ_0, w_∞ and δ_∞, all of which have integer coefficients.
#[derive(Clone, Debug)]
struct IntegralPoints {
    w0: ZPoly,
    d0: ZPoly,
    w_inf: ZPoly,
    d_inf: ZPoly,
}

impl IntegralPoints {
    fn new(points: &FourteenPoints) -> Self {
        let z = |p: &MPoly| ZPoly::from_mpoly(p).expect("points 0 and inf are integral");
        IntegralPoints {
            w0: z(&points.w[0]),
            d0: z(&points.delta[0]),
            w_inf: z(&points.w[INF]),
            d_inf: z(&points.delta[INF]),
        }
    }
}

/// Exponent of ζ by which T scales each variable.
pub const T_WEIGHTS: [u32; 6] = [7, 11, 8, 6, 2, 5];

impl InvariantContext {
    pub fn new() -> Self {
        let gens = build_generators();
        let forms = build_forms();
        let points = build_fourteen_points(&forms);
        let mut st = Vec::with_capacity(13);
        let mut cur = gens.s.clone();
        for _ in 0..13 {
            st.push(cur.clone());
            cur = cur.mul(&gens.t);
        }
        let integral = IntegralPoints::new(&points);
        InvariantContext { gens, forms, points, st, integral }
    }

    /// The word element H evaluated from S and T.
    pub fn h(&self) -> GMatrix {
        build_word_elements(&self.gens).h
    }
}

impl Default for InvariantContext {
    fn default() -> Self {
        Self::new()
    }
}

/// Right-hand side of the quadratic law with every ζ^{e ν} replaced by
/// ζ^{e (ν + shift)}; `shift = 0` is the law itself.
pub fn a_transformation_rhs(forms: &FormFamily, nu: usize, shift: usize) -> MPoly {
    phi_nu(forms, nu + shift)
}

/// √13 · A_0(S T^ν z) against φ_ν.
pub fn verify_a_transformation(ctx: &InvariantContext, nu: usize) -> CheckResult {
    verify_a_against(ctx, nu, &a_transformation_rhs(&ctx.forms, nu, 0))
}

pub fn verify_a_against(ctx: &InvariantContext, nu: usize, rhs: &MPoly) -> CheckResult {
    let lhs = ctx.forms.a[0].substitute_linear(&ctx.st[nu]).scale(&gauss_sqrt13());
    let diff = lhs.sub(rhs);
    CheckResult::new(
        format!("quadratic transformation law, nu={nu}"),
        diff.is_zero(),
        if diff.is_zero() {
            "exact equality".to_string()
        } else {
            format!("{} differing terms", diff.len())
        },
    )
    .cite("transformation of A_0 under S T^nu")
}

fn d_row_rhs(forms: &FormFamily, rad: &Radicals, nu: usize, infinity_row: bool) -> MPoly {
    let (first, last, pattern) = if infinity_row {
        (rad.r_inf.clone(), -&rad.r0, &DINF_ROW)
    } else {
        (rad.r0.clone(), rad.r_inf.clone(), &D0_ROW)
    };
    let mut acc = forms.d[0].scale(&first).add(&forms.d[INF].scale(&last));
    for (k, &(sign, which)) in pattern.iter().enumerate() {
        let k = k + 1;
        let c = rad.r(which).scale_int(sign) * CycloElem::zeta_power((k * nu) as i64);
        acc = acc.add(&forms.d[k].scale(&c));
    }
    acc
}

fn d_row_lhs(ctx: &InvariantContext, nu: usize, infinity_row: bool) -> MPoly {
    let form = if infinity_row { &ctx.forms.d[INF] } else { &ctx.forms.d[0] };
    let k = gauss_sqrt13().scale_int(-13);
    form.substitute_linear(&ctx.st[nu]).scale(&k)
}

/// Resolves the branches of r₁..r₄ by requiring both cubic rows at ν = 0.
/// Returns the radicals and the flips applied to the period-difference
/// candidates.
pub fn resolve_radicals(ctx: &InvariantContext) -> Result<(Radicals, [bool; 4]), InvariantError> {
    let base = periods_and_radicals()?;
    let lhs0 = d_row_lhs(ctx, 0, false);
    let lhs_inf = d_row_lhs(ctx, 0, true);
    for mask in 0..16u32 {
        let flips = std::array::from_fn(|k| mask & (1 << k) != 0);
        let rad = base.with_flips(flips);
        if d_row_rhs(&ctx.forms, &rad, 0, false) == lhs0
            && d_row_rhs(&ctx.forms, &rad, 0, true) == lhs_inf
        {
            return Ok((rad, flips));
        }
    }
    Err(InvariantError::NoSignAssignment)
}

/// Both cubic transformation rows at ν.
pub fn verify_d_transformation(ctx: &InvariantContext, rad: &Radicals, nu: usize) -> Vec<CheckResult> {
    [false, true]
        .into_iter()
        .map(|inf_row| {
            let lhs = d_row_lhs(ctx, nu, inf_row);
            let rhs = d_row_rhs(&ctx.forms, rad, nu, inf_row);
            let diff = lhs.sub(&rhs);
            let row = if inf_row { "D_inf" } else { "D_0" };
            CheckResult::new(
                format!("cubic transformation law, {row} row, nu={nu}"),
                diff.is_zero(),
                if diff.is_zero() {
                    "exact equality".to_string()
                } else {
                    format!("{} differing terms", diff.len())
                },
            )
            .cite("transformation of D_0 and D_inf under S T^nu")
        })
        .collect()
}

/// 13² · G_0(S T^ν z) against δ_ν.
pub fn verify_g_transformation(ctx: &InvariantContext, nu: usize) -> CheckResult {
    let lhs = ctx.forms.g[0].substitute_linear(&ctx.st[nu]).scale_int(169);
    let diff = lhs.sub(&ctx.points.delta[nu]);
    CheckResult::new(
        format!("sextic transformation law, nu={nu}"),
        diff.is_zero(),
        if diff.is_zero() {
            "exact equality".to_string()
        } else {
            format!("{} differing terms", diff.len())
        },
    )
    .cite("transformation of G_0 under S T^nu")
}

/// The action of a group element on the fourteen indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPermutation {
    /// w_ν ∘ g = w_{σ(ν)}.
    pub sigma: [usize; POINTS],
    /// φ_ν ∘ g = sign · φ_{σ(ν)}.
    pub phi_signs: [i8; POINTS],
}

impl PointPermutation {
    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; POINTS];
        let mut out = Vec::new();
        for start in 0..POINTS {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.sigma[i];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

impl fmt::Display for PointPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = [false; POINTS];
        let mut wrote = false;
        for start in 0..POINTS {
            if seen[start] || self.sigma[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(point_label(i));
                i = self.sigma[i];
            }
            write!(f, "({})", cyc.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Images of the fourteen-point system under one group element.
pub type PointImages = FourteenPoints;

/// φ_ν∘g, w_ν∘g and δ_ν∘g, obtained by substituting only the A and D forms
/// and rebuilding, since substitution is a ring homomorphism.
pub fn point_images(ctx: &InvariantContext, g: &GMatrix) -> PointImages {
    let a: Vec<MPoly> = ctx.forms.a.iter().map(|x| x.substitute_linear(g)).collect();
    let d: Vec<MPoly> = ctx.forms.d.iter().map(|x| x.substitute_linear(g)).collect();
    points_from(&a, &g_from(&d))
}

/// Finds σ with w_ν∘g = w_σ(ν) and δ_ν∘g = δ_σ(ν), and the signs of φ.
pub fn compute_group_permutation(
    ctx: &InvariantContext,
    g: &GMatrix,
) -> Result<PointPermutation, InvariantError> {
    permutation_from_images(ctx, &point_images(ctx, g))
}

pub fn permutation_from_images(
    ctx: &InvariantContext,
    img: &PointImages,
) -> Result<PointPermutation, InvariantError> {
    let lookup: HashMap<&MPoly, usize> = ctx.points.w.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut sigma = [0usize; POINTS];
    let mut phi_signs = [0i8; POINTS];
    let mut used = [false; POINTS];
    for nu in 0..POINTS {
        let target = *lookup.get(&img.w[nu]).ok_or(InvariantError::NoPermutation { index: nu })?;
        if used[target] || img.delta[nu] != ctx.points.delta[target] {
            return Err(InvariantError::NoPermutation { index: nu });
        }
        used[target] = true;
        sigma[nu] = target;
        phi_signs[nu] = if img.phi[nu] == ctx.points.phi[target] {
            1
        } else if img.phi[nu] == ctx.points.phi[target].neg() {
            -1
        } else {
            return Err(InvariantError::NoPermutation { index: nu });
        };
    }
    Ok(PointPermutation { sigma, phi_signs })
}

/// One Φ_{m,n} with its normalization factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSpec {
    pub m: u32,
    pub n: u32,
    pub normalization: Rational,
}

/// Published normalization: the power sum is divided by `sign · 13 · k`.
pub struct NormalizationEntry {
    pub m: u32,
    pub n: u32,
    pub sign: i64,
    pub k: i64,
    pub anchor: &'static str,
}

const fn entry(m: u32, n: u32, sign: i64, k: i64, anchor: &'static str) -> NormalizationEntry {
    NormalizationEntry { m, n, sign, k, anchor }
}

/// Bumped whenever [`NORMALIZATIONS`] changes; part of every cache key.
pub const NORMALIZATION_VERSION: u32 = 1;

/// Normalization constants as stated for the identified invariants.
pub const NORMALIZATIONS: [NormalizationEntry; 17] = [
    entry(3, 0, -1, 30, "normalization of degree-12 power sums"),
    entry(0, 2, -1, 52, "normalization of degree-12 power sums"),
    entry(5, 0, 1, 25, "normalization of degree-20 power sums"),
    entry(2, 2, 1, 26, "normalization of degree-20 power sums"),
    entry(0, 5, -1, 1315, "normalization of degree-30 power sums"),
    entry(3, 3, -1, 27, "normalization of degree-30 power sums"),
    entry(6, 1, -1, 285, "normalization of degree-30 power sums"),
    entry(3, 1, 1, 2, "normalization of degree-18 power sums"),
    entry(0, 3, 1, 6, "normalization of degree-18 power sums"),
    entry(8, 0, -1, 1840, "normalization of degree-32 power sums"),
    entry(5, 2, -1, 2064, "normalization of degree-32 power sums"),
    entry(2, 4, -1, 680, "normalization of degree-32 power sums"),
    entry(0, 7, 1, 226842, "normalization of degree-42 power sums"),
    entry(3, 5, 1, 634, "normalization of degree-42 power sums"),
    entry(6, 3, 1, 10656, "normalization of degree-42 power sums"),
    entry(9, 1, 1, 39134, "normalization of degree-42 power sums"),
    entry(11, 0, 1, 146905, "normalization of degree-44 power sums"),
];

pub fn normalization_entry(m: u32, n: u32) -> Option<&'static NormalizationEntry> {
    NORMALIZATIONS.iter().find(|e| e.m == m && e.n == n)
}

impl InvariantSpec {
    /// Uses the published normalization, or 1 where none is stated.
    pub fn stated(m: u32, n: u32) -> Self {
        let normalization = match normalization_entry(m, n) {
            Some(e) => Rational::new(1.into(), (e.sign * 13 * e.k).into()),
            None => Rational::from_integer(1.into()),
        };
        InvariantSpec { m, n, normalization }
    }

    /// The plain power sum.
    pub fn raw(m: u32, n: u32) -> Self {
        InvariantSpec { m, n, normalization: Rational::from_integer(1.into()) }
    }

    pub fn with_normalization(m: u32, n: u32, normalization: Rational) -> Self {
        InvariantSpec { m, n, normalization }
    }

    pub fn degree(&self) -> u32 {
        4 * self.m + 6 * self.n
    }
}

/// Default symbolic degree budget.
pub const DEFAULT_DEGREE_BUDGET: u32 = 30;

/// Exact normalized Φ_{m,n} as a polynomial.
///
/// T fixes ∞ and cycles the thirteen finite points, so the finite part of the
/// power sum is 13 times the T-weight-0 part of w_0^m δ_0^n. Everything stays
/// in integer arithmetic until the normalization.
pub fn build_invariant_symbolic(
    ctx: &InvariantContext,
    spec: &InvariantSpec,
    budget: u32,
) -> Result<MPoly, InvariantError> {
    if spec.degree() > budget {
        return Err(InvariantError::BudgetExceeded { degree: spec.degree(), budget });
    }
    Ok(raw_power_sum(ctx, spec.m, spec.n)?.to_mpoly().scale_rational(&spec.normalization))
}

fn raw_power_sum(ctx: &InvariantContext, m: u32, n: u32) -> Result<ZPoly, InvariantError> {
    let z = &ctx.integral;
    let at_inf = z.w_inf.pow(m)?.mul(&z.d_inf.pow(n)?)?;
    let invariant_part = |head: ZPoly, last: &ZPoly| head.mul_weight_part(last, &T_WEIGHTS, 13, 0);
    let finite = match (m, n) {
        (0, 0) => ZPoly::one(),
        (_, 0) => invariant_part(z.w0.pow(m - 1)?, &z.w0)?,
        _ => invariant_part(z.w0.pow(m)?.mul(&z.d0.pow(n - 1)?)?, &z.d0)?,
    };
    Ok(at_inf.add(&finite.scale(13)?)?)
}

/// Evaluates normalized Φ_{m,n} at an exact point through the power sum.
pub fn evaluate_invariant(ctx: &InvariantContext, spec: &InvariantSpec, x: &[CycloElem]) -> CycloElem {
    let p = &ctx.points;
    let mut sum = CycloElem::zero();
    for nu in 0..POINTS {
        let w = p.w[nu].evaluate(x);
        let d = p.delta[nu].evaluate(x);
        sum += &(w.pow(spec.m) * d.pow(spec.n));
    }
    sum.scale(&spec.normalization)
}

/// A symbolic polynomial or an on-demand evaluator.
#[derive(Clone, Debug)]
pub enum InvariantHandle {
    Symbolic { spec: InvariantSpec, poly: MPoly },
    Sampled { spec: InvariantSpec },
}

impl InvariantHandle {
    pub fn spec(&self) -> &InvariantSpec {
        match self {
            InvariantHandle::Symbolic { spec, .. } | InvariantHandle::Sampled { spec } => spec,
        }
    }

    pub fn evaluate(&self, ctx: &InvariantContext, x: &[CycloElem]) -> CycloElem {
        match self {
            InvariantHandle::Symbolic { poly, .. } => poly.evaluate(x),
            InvariantHandle::Sampled { spec } => evaluate_invariant(ctx, spec, x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Symbolic,
    Sampled,
}

pub fn build_invariant(
    ctx: &InvariantContext,
    spec: InvariantSpec,
    strategy: Strategy,
    budget: u32,
) -> Result<InvariantHandle, InvariantError> {
    match strategy {
        Strategy::Symbolic => {
            let poly = build_invariant_symbolic(ctx, &spec, budget)?;
            Ok(InvariantHandle::Symbolic { spec, poly })
        }
        Strategy::Sampled => Ok(InvariantHandle::Sampled { spec }),
    }
}

/// Degree up to which invariance is checked by substituting the expanded
/// polynomial directly under a non-monomial matrix.
pub const DIRECT_SUBSTITUTION_DEGREE: u32 = 6;

/// Degree up to which the power sum is reassembled from substituted points.
pub const REASSEMBLY_DEGREE: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvarianceMode {
    Symbolic,
    Points { samples: usize, seed: u64 },
}

/// Random integer point in [−9, 9]⁶.
pub fn random_point(rng: &mut ChaCha8Rng) -> Vec<CycloElem> {
    (0..6).map(|_| CycloElem::from_int(rng.gen_range(-9..=9))).collect()
}

fn equality_result(name: String, image: &MPoly, poly: &MPoly, how: &str) -> CheckResult {
    let diff = image.sub(poly);
    let witness = if diff.is_zero() {
        format!("{how}, {} terms", poly.len())
    } else {
        format!("{} differing terms", diff.len())
    };
    CheckResult::new(name, diff.is_zero(), witness)
}

/// Invariance of a handle under S and under T.
///
/// Symbolic mode substitutes the expanded polynomial when the matrix is
/// monomial or the degree is at most [`DIRECT_SUBSTITUTION_DEGREE`]; up to
/// [`REASSEMBLY_DEGREE`] it substitutes the fourteen points and reassembles
/// the normalized power sum. Beyond that, and for sampled handles, the exact
/// permutation of the fourteen points (w and δ together) is the certificate.
/// Points mode compares exact values at g·x and x.
pub fn verify_invariance(
    ctx: &InvariantContext,
    handle: &InvariantHandle,
    mode: InvarianceMode,
) -> Vec<CheckResult> {
    let spec = handle.spec();
    let label = format!("Phi_{{{},{}}}", spec.m, spec.n);
    let elements = [("S", &ctx.gens.s), ("T", &ctx.gens.t)];
    elements
        .iter()
        .map(|(gname, g)| {
            let name = format!("invariance of {label} under {gname}");
            match (mode, handle) {
                (InvarianceMode::Symbolic, InvariantHandle::Symbolic { poly, .. })
                    if g.monomial_pattern().is_some() || poly.degree() <= DIRECT_SUBSTITUTION_DEGREE =>
                {
                    equality_result(name, &poly.substitute_linear(g), poly, "exact symbolic equality")
                }
                (InvarianceMode::Symbolic, InvariantHandle::Symbolic { poly, .. })
                    if poly.degree() <= REASSEMBLY_DEGREE =>
                {
                    let img = point_images(ctx, g);
                    let image = assemble_power_sum(&img.w, &img.delta, spec);
                    equality_result(name, &image, poly, "exact equality after reassembly")
                }
                (InvarianceMode::Symbolic, _) => match compute_group_permutation(ctx, g) {
                    Ok(p) => CheckResult::new(
                        name,
                        true,
                        format!("w and delta permuted exactly by {p}, so every power sum is preserved"),
                    ),
                    Err(e) => CheckResult::new(name, false, e.to_string()),
                },
                (InvarianceMode::Points { samples, seed }, _) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut bad = None;
                    for k in 0..samples {
                        let x = random_point(&mut rng);
                        let gx = g.apply(&x);
                        if handle.evaluate(ctx, &gx) != handle.evaluate(ctx, &x) {
                            bad = Some((k, x));
                            break;
                        }
                    }
                    match bad {
                        None => CheckResult::new(name, true, format!("{samples} exact sample points agree")),
                        Some((k, x)) => CheckResult::new(
                            name,
                            false,
                            format!(
                                "sample {k} at ({}) differs",
                                x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                            ),
                        ),
                    }
                }
            }
            .cite("invariance of the power sums under the group")
        })
        .collect()
}

/// norm · Σ_ν w_ν^m δ_ν^n over fourteen given polynomials.
pub fn assemble_power_sum(w: &[MPoly], delta: &[MPoly], spec: &InvariantSpec) -> MPoly {
    let mut acc = MPoly::zero();
    for (wv, dv) in w.iter().zip(delta) {
        acc = acc.add(&wv.pow(spec.m).mul(&dv.pow(spec.n)));
    }
    acc.scale_rational(&spec.normalization)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Degrees 12, 20, 30; parameters (λ, μ, γ₁, γ₂).
    E8,
    /// Degrees 12, 32, 42, 44; parameters (λ, μ₁, μ₂, γ₁, γ₂, γ₃).
    Q18E20,
}

/// An affine combination Σ c_{m,n} Φ_{m,n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination {
    pub label: &'static str,
    pub terms: Vec<(u32, u32, Rational)>,
}

impl Combination {
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| 4 * t.0 + 6 * t.1)
    }

    /// Σ c · value(m, n) for any additive target.
    pub fn combine<T>(&self, value: impl Fn(u32, u32) -> T, scale: impl Fn(&T, &Rational) -> T, add: impl Fn(&T, &T) -> T, zero: T) -> T {
        let mut acc = zero;
        for (m, n, c) in &self.terms {
            let v = value(*m, *n);
            acc = add(&acc, &scale(&v, c));
        }
        acc
    }

    /// Coefficient of Φ_{m,n}, zero if absent.
    pub fn coefficient(&self, m: u32, n: u32) -> Rational {
        self.terms
            .iter()
            .find(|t| t.0 == m && t.1 == n)
            .map_or_else(|| Rational::from_integer(0.into()), |t| t.2.clone())
    }
}

fn affine(label: &'static str, pairs: &[(u32, u32)], params: &[Rational]) -> Combination {
    let one = Rational::from_integer(1.into());
    let mut rest = one;
    let mut terms = Vec::new();
    for (&(m, n), c) in pairs.iter().zip(params) {
        rest -= c;
        terms.push((m, n, c.clone()));
    }
    let (m, n) = pairs[pairs.len() - 1];
    terms.push((m, n, rest));
    terms.retain(|t| t.2 != Rational::from_integer(0.into()));
    Combination { label, terms }
}

/// The parametrized invariants of a singularity family.
pub fn build_parametrized(family: Family, params: &[Rational]) -> Result<Vec<Combination>, InvariantError> {
    let expected = match family {
        Family::E8 => 4,
        Family::Q18E20 => 6,
    };
    if params.len() != expected {
        return Err(InvariantError::ParamCount {
            family: match family {
                Family::E8 => "E8",
                Family::Q18E20 => "Q18E20",
            },
            expected,
            got: params.len(),
        });
    }
    let phi12 = affine("Phi12", &[(3, 0), (0, 2)], &params[..1]);
    Ok(match family {
        Family::E8 => vec![
            phi12,
            affine("Phi20", &[(5, 0), (2, 2)], &params[1..2]),
            affine("Phi30", &[(0, 5), (3, 3), (6, 1)], &params[2..4]),
        ],
        Family::Q18E20 => vec![
            phi12,
            affine("Phi32", &[(8, 0), (5, 2), (2, 4)], &params[1..3]),
            affine("Phi42", &[(0, 7), (3, 5), (6, 3), (9, 1)], &params[3..6]),
            affine("Phi44", &[(11, 0)], &[]),
        ],
    })
}
