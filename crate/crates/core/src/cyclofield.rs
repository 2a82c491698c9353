//! Exact arithmetic in the cyclotomic field Q(ζ), ζ = exp(2πi/13).
//!
//! Elements are stored in the power basis ζ⁰..ζ¹¹ as a common positive
//! denominator and twelve integer numerators in lowest terms. Any ζ¹² that
//! appears during arithmetic is rewritten with 1 + ζ + … + ζ¹² = 0.
//!
//! Numerators and denominator live in `i64` while they fit; arithmetic is done
//! in `i128` with overflow checks and falls back to [`BigInt`] on overflow.
//! The representation is canonical: an element uses the small form exactly
//! when every part fits in `i64`, so derived equality and hashing are exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Order of the root of unity.
pub const ORDER: usize = 13;
/// Degree of Q(ζ) over Q.
pub const DIM: usize = 12;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Quadratic residues modulo 13.
pub const QUADRATIC_RESIDUES: [usize; 6] = [1, 3, 4, 9, 10, 12];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("division by zero in Q(zeta_13)")]
    DivisionByZero,
    #[error("malformed cyclotomic element: {0}")]
    Parse(String),
    #[error("embedding precision {0} is outside the supported range 10..=15 digits")]
    Precision(u32),
    #[error("radical {name} fails its defining square: got {got}")]
    RadicalSquare { name: &'static str, got: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { den: i64, num: [i64; DIM] },
    Big(Box<BigRepr>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct BigRepr {
    den: BigInt,
    num: [BigInt; DIM],
}

/// An exact element of Q(ζ₁₃).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElem(Repr);

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl CycloElem {
    pub fn zero() -> Self {
        CycloElem(Repr::Small { den: 1, num: [0; DIM] })
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        let mut num = [0; DIM];
        num[0] = n;
        CycloElem(Repr::Small { den: 1, num })
    }

    pub fn from_bigint(n: BigInt) -> Self {
        let mut num: [BigInt; DIM] = Default::default();
        num[0] = n;
        Self::from_big_parts(BigInt::one(), num)
    }

    pub fn from_rational(r: &Rational) -> Self {
        let mut num: [BigInt; DIM] = Default::default();
        num[0] = r.numer().clone();
        Self::from_big_parts(r.denom().clone(), num)
    }

    /// Builds an element from its twelve power-basis coordinates.
    pub fn from_coeffs(coeffs: &[Rational; DIM]) -> Self {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num: [BigInt; DIM] =
            std::array::from_fn(|k| coeffs[k].numer() * (&den / coeffs[k].denom()));
        Self::from_big_parts(den, num)
    }

    /// Builds an element from integer coordinates on ζ⁰..ζ¹², reducing ζ¹².
    pub fn from_ints13(c: &[i64; ORDER]) -> Self {
        let num: [i128; DIM] = std::array::from_fn(|k| c[k] as i128 - c[DIM] as i128);
        Self::from_wide(1, num)
    }

    /// ζ^k with k taken modulo 13.
    pub fn zeta_power(k: i64) -> Self {
        let k = k.rem_euclid(ORDER as i64) as usize;
        let mut c = [0i64; ORDER];
        c[k] = 1;
        Self::from_ints13(&c)
    }

    fn from_wide(den: i128, num: [i128; DIM]) -> Self {
        let (mut den, mut num) = (den, num);
        if den < 0 {
            den = -den;
            for x in num.iter_mut() {
                *x = -*x;
            }
        }
        if den != 1 {
            let mut g = den;
            for x in &num {
                if g == 1 {
                    break;
                }
                g = gcd_i128(g, *x);
            }
            if g > 1 {
                den /= g;
                for x in num.iter_mut() {
                    *x /= g;
                }
            }
        }
        if num.iter().all(|x| *x == 0) {
            return Self::zero();
        }
        if let Ok(d) = i64::try_from(den) {
            let mut small = [0i64; DIM];
            let mut fits = true;
            for (s, x) in small.iter_mut().zip(num.iter()) {
                match i64::try_from(*x) {
                    Ok(v) => *s = v,
                    Err(_) => {
                        fits = false;
                        break;
                    }
                }
            }
            if fits {
                return CycloElem(Repr::Small { den: d, num: small });
            }
        }
        Self::from_big_parts(BigInt::from(den), num.map(BigInt::from))
    }

    fn from_big_parts(den: BigInt, num: [BigInt; DIM]) -> Self {
        let (mut den, mut num) = (den, num);
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        if num.iter().all(Zero::is_zero) {
            return Self::zero();
        }
        if !den.is_one() {
            let mut g = den.clone();
            for x in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(x);
            }
            if !g.is_one() {
                den /= &g;
                for x in num.iter_mut() {
                    *x /= &g;
                }
            }
        }
        if let Some(d) = den.to_i64() {
            let small: Option<Vec<i64>> = num.iter().map(ToPrimitive::to_i64).collect();
            if let Some(small) = small {
                let mut arr = [0i64; DIM];
                arr.copy_from_slice(&small);
                return CycloElem(Repr::Small { den: d, num: arr });
            }
        }
        CycloElem(Repr::Big(Box::new(BigRepr { den, num })))
    }

    fn big_parts(&self) -> (BigInt, [BigInt; DIM]) {
        match &self.0 {
            Repr::Small { den, num } => (BigInt::from(*den), num.map(BigInt::from)),
            Repr::Big(b) => (b.den.clone(), b.num.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Small { num, .. } if num.iter().all(|x| *x == 0))
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// True when all ζ-components above index 0 vanish.
    pub fn is_rational(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => num[1..].iter().all(|x| *x == 0),
            Repr::Big(b) => b.num[1..].iter().all(Zero::is_zero),
        }
    }

    pub fn rational_part(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeff(0))
    }

    /// Coordinate on ζ^k, k in 0..12.
    pub fn coeff(&self, k: usize) -> Rational {
        match &self.0 {
            Repr::Small { den, num } => Rational::new(num[k].into(), (*den).into()),
            Repr::Big(b) => Rational::new(b.num[k].clone(), b.den.clone()),
        }
    }

    pub fn coeffs(&self) -> [Rational; DIM] {
        std::array::from_fn(|k| self.coeff(k))
    }

    /// Common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.den.clone(),
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if let (Repr::Small { den: d1, num: n1 }, Repr::Small { den: d2, num: n2 }) =
            (&self.0, &rhs.0)
        {
            if let Some(r) = small_add(*d1, n1, *d2, n2) {
                return r;
            }
        }
        let (d1, n1) = self.big_parts();
        let (d2, n2) = rhs.big_parts();
        if d1 == d2 {
            let num: [BigInt; DIM] = std::array::from_fn(|k| &n1[k] + &n2[k]);
            return Self::from_big_parts(d1, num);
        }
        let num: [BigInt; DIM] = std::array::from_fn(|k| &n1[k] * &d2 + &n2[k] * &d1);
        Self::from_big_parts(d1 * d2, num)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if let (Repr::Small { den: d1, num: n1 }, Repr::Small { den: d2, num: n2 }) =
            (&self.0, &rhs.0)
        {
            if let Some(r) = small_mul(*d1, n1, *d2, n2) {
                return r;
            }
        }
        let (d1, n1) = self.big_parts();
        let (d2, n2) = rhs.big_parts();
        let mut acc: [BigInt; ORDER] = Default::default();
        for (i, a) in n1.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in n2.iter().enumerate() {
                if !b.is_zero() {
                    acc[(i + j) % ORDER] += a * b;
                }
            }
        }
        let top = acc[DIM].clone();
        let num: [BigInt; DIM] = std::array::from_fn(|k| &acc[k] - &top);
        Self::from_big_parts(d1 * d2, num)
    }

    pub fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Small { den, num } if num.iter().all(|x| *x != i64::MIN) => {
                CycloElem(Repr::Small { den: *den, num: num.map(|x| -x) })
            }
            _ => {
                let (d, n) = self.big_parts();
                Self::from_big_parts(d, n.map(|x| -x))
            }
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.mul_ref(&Self::from_int(k))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.mul_ref(&Self::from_rational(r))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse, by solving the 12×12 rational system for
    /// multiplication by `self`.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        // Column j of the operator is self·ζ^j.
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); DIM + 1]; DIM];
        for j in 0..DIM {
            let col = self.mul_ref(&Self::zeta_power(j as i64));
            for (i, row) in rows.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
        }
        rows[0][DIM] = Rational::one();
        let x = solve_augmented(rows).ok_or(CycloError::DivisionByZero)?;
        let arr: [Rational; DIM] = std::array::from_fn(|k| x[k].clone());
        Ok(Self::from_coeffs(&arr))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, CycloError> {
        Ok(self.mul_ref(&rhs.inv()?))
    }

    /// The automorphism σ_k: ζ ↦ ζ^k (k prime to 13; k ≡ 0 maps ζ to 1).
    pub fn galois(&self, k: i64) -> Self {
        let k = k.rem_euclid(ORDER as i64) as usize;
        let (den, num) = self.big_parts();
        let mut acc: [BigInt; ORDER] = Default::default();
        for (j, c) in num.into_iter().enumerate() {
            acc[(j * k) % ORDER] += c;
        }
        let top = acc[DIM].clone();
        let out: [BigInt; DIM] = std::array::from_fn(|i| &acc[i] - &top);
        Self::from_big_parts(den, out)
    }

    /// Field trace to Q: Σ_k σ_k(self) = 12·c₀ − (c₁ + … + c₁₁).
    pub fn trace(&self) -> Rational {
        let (den, num) = self.big_parts();
        let mut t = &num[0] * BigInt::from(DIM as i64);
        for c in &num[1..] {
            t -= c;
        }
        Rational::new(t, den)
    }

    /// Complex value under ζ ↦ exp(2πi/13), accurate to about `digits`
    /// significant decimal digits relative to the coordinate magnitudes.
    pub fn embed_complex(&self, digits: u32) -> Result<Complex64, CycloError> {
        if !(10..=15).contains(&digits) {
            return Err(CycloError::Precision(digits));
        }
        Ok(self.to_complex())
    }

    /// Double-precision complex value under ζ ↦ exp(2πi/13).
    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for k in 0..DIM {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * k as f64 / ORDER as f64;
            z += Complex64::new(v * t.cos(), v * t.sin());
        }
        z
    }

    /// Canonical text: 12 space-separated `n/d` rationals in basis order.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        for k in 0..DIM {
            if k > 0 {
                out.push(' ');
            }
            let c = self.coeff(k);
            out.push_str(&format!("{}/{}", c.numer(), c.denom()));
        }
        out
    }

    /// Parses the canonical text form (an integer is accepted for `n/1`).
    pub fn parse_canonical(s: &str) -> Result<Self, CycloError> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != DIM {
            return Err(CycloError::Parse(format!(
                "expected {DIM} rationals, found {}",
                parts.len()
            )));
        }
        let mut coeffs: [Rational; DIM] = Default::default();
        for (c, p) in coeffs.iter_mut().zip(parts) {
            *c = parse_rational(p)?;
        }
        Ok(Self::from_coeffs(&coeffs))
    }
}

/// Parses `n` or `n/d` with `d > 0`.
pub fn parse_rational(s: &str) -> Result<Rational, CycloError> {
    let bad = || CycloError::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if !d.is_positive() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn small_add(d1: i64, n1: &[i64; DIM], d2: i64, n2: &[i64; DIM]) -> Option<CycloElem> {
    let mut num = [0i128; DIM];
    if d1 == d2 {
        for k in 0..DIM {
            num[k] = n1[k] as i128 + n2[k] as i128;
        }
        return Some(CycloElem::from_wide(d1 as i128, num));
    }
    let (a, b) = (d1 as i128, d2 as i128);
    for k in 0..DIM {
        num[k] = (n1[k] as i128 * b).checked_add(n2[k] as i128 * a)?;
    }
    Some(CycloElem::from_wide(a * b, num))
}

fn small_mul(d1: i64, n1: &[i64; DIM], d2: i64, n2: &[i64; DIM]) -> Option<CycloElem> {
    let mut acc = [0i128; ORDER];
    for (i, &a) in n1.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in n2.iter().enumerate() {
            if b != 0 {
                let slot = &mut acc[(i + j) % ORDER];
                *slot = slot.checked_add(a as i128 * b as i128)?;
            }
        }
    }
    let top = acc[DIM];
    let mut num = [0i128; DIM];
    for k in 0..DIM {
        num[k] = acc[k].checked_sub(top)?;
    }
    Some(CycloElem::from_wide(d1 as i128 * d2 as i128, num))
}

/// Gauss-Jordan elimination on an n×(n+1) augmented rational system.
/// Returns `None` when the system is singular.
pub fn solve_augmented(mut rows: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
    }
    Some(rows.into_iter().map(|r| r[n].clone()).collect())
}

impl Default for CycloElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem({self})")
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in 0..DIM {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}z", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}z^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl FromStr for CycloElem {
    type Err = CycloError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_canonical(s)
    }
}

impl From<i64> for CycloElem {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<&Rational> for CycloElem {
    fn from(r: &Rational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&CycloElem> for &CycloElem {
            type Output = CycloElem;
            fn $m(self, rhs: &CycloElem) -> CycloElem {
                $imp(self, rhs)
            }
        }
        impl $tr<CycloElem> for CycloElem {
            type Output = CycloElem;
            fn $m(self, rhs: CycloElem) -> CycloElem {
                $imp(&self, &rhs)
            }
        }
        impl $tr<&CycloElem> for CycloElem {
            type Output = CycloElem;
            fn $m(self, rhs: &CycloElem) -> CycloElem {
                $imp(&self, rhs)
            }
        }
        impl $tr<CycloElem> for &CycloElem {
            type Output = CycloElem;
            fn $m(self, rhs: CycloElem) -> CycloElem {
                $imp(self, &rhs)
            }
        }
    };
}

fn add_impl(a: &CycloElem, b: &CycloElem) -> CycloElem {
    a.add_ref(b)
}
fn sub_impl(a: &CycloElem, b: &CycloElem) -> CycloElem {
    a.add_ref(&b.neg_ref())
}
fn mul_impl(a: &CycloElem, b: &CycloElem) -> CycloElem {
    a.mul_ref(b)
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl AddAssign<&CycloElem> for CycloElem {
    fn add_assign(&mut self, rhs: &CycloElem) {
        *self = self.add_ref(rhs);
    }
}
impl SubAssign<&CycloElem> for CycloElem {
    fn sub_assign(&mut self, rhs: &CycloElem) {
        *self = self.add_ref(&rhs.neg_ref());
    }
}
impl MulAssign<&CycloElem> for CycloElem {
    fn mul_assign(&mut self, rhs: &CycloElem) {
        *self = self.mul_ref(rhs);
    }
}
impl AddAssign for CycloElem {
    fn add_assign(&mut self, rhs: CycloElem) {
        *self = self.add_ref(&rhs);
    }
}
impl MulAssign for CycloElem {
    fn mul_assign(&mut self, rhs: CycloElem) {
        *self = self.mul_ref(&rhs);
    }
}
impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        self.neg_ref()
    }
}
impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        self.neg_ref()
    }
}

impl Zero for CycloElem {
    fn zero() -> Self {
        CycloElem::zero()
    }
    fn is_zero(&self) -> bool {
        CycloElem::is_zero(self)
    }
}

impl One for CycloElem {
    fn one() -> Self {
        CycloElem::one()
    }
}

/// The quadratic Gauss sum Σ_{QR} ζ^a − Σ_{NR} ζ^a, which squares to 13 and
/// embeds as +√13.
pub fn gauss_sqrt13() -> CycloElem {
    let mut c = [0i64; ORDER];
    for (a, slot) in c.iter_mut().enumerate().skip(1) {
        *slot = if QUADRATIC_RESIDUES.contains(&a) { 1 } else { -1 };
    }
    CycloElem::from_ints13(&c)
}

fn zeta_combo(plus: &[i64], minus: &[i64]) -> CycloElem {
    let mut c = [0i64; ORDER];
    for &k in plus {
        c[k.rem_euclid(13) as usize] += 1;
    }
    for &k in minus {
        c[k.rem_euclid(13) as usize] -= 1;
    }
    CycloElem::from_ints13(&c)
}

/// The three quadratic combinations whose sum is √13.
pub fn alpha_beta_gamma() -> [CycloElem; 3] {
    [
        zeta_combo(&[1, 12], &[5, 8]),
        zeta_combo(&[3, 10], &[2, 11]),
        zeta_combo(&[9, 4], &[6, 7]),
    ]
}

/// The length-3 Gaussian periods θ₁..θ₄.
pub fn periods() -> [CycloElem; 4] {
    [
        zeta_combo(&[1, 3, 9], &[]),
        zeta_combo(&[2, 6, 5], &[]),
        zeta_combo(&[4, 12, 10], &[]),
        zeta_combo(&[8, 11, 7], &[]),
    ]
}

/// Periods and the radicals r₀, r₁..r₄, r_∞ built from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radicals {
    pub theta: [CycloElem; 4],
    pub r0: CycloElem,
    /// r₁..r₄ at indices 0..3.
    pub r: [CycloElem; 4],
    pub r_inf: CycloElem,
}

impl Radicals {
    /// Radical r_k for k in 1..=4.
    pub fn r(&self, k: usize) -> &CycloElem {
        &self.r[k - 1]
    }

    /// Copy with r_k negated for every k (1-based) whose flag is set.
    pub fn with_flips(&self, flips: [bool; 4]) -> Radicals {
        let mut out = self.clone();
        for (r, flip) in out.r.iter_mut().zip(flips) {
            if flip {
                *r = r.neg_ref();
            }
        }
        out
    }
}

/// Builds θ₁..θ₄, r₀, r_∞ as displayed, and candidate square roots r₁..r₄
/// from period differences. Each candidate is checked against its defining
/// square; the branch (sign) of r₁..r₄ is resolved separately against the
/// cubic transformation law.
pub fn periods_and_radicals() -> Result<Radicals, CycloError> {
    let theta = periods();
    let [t1, t2, t3, t4] = theta.clone();
    let u = &t1 - &t3;
    let v = &t2 - &t4;
    let r0 = u.scale_int(2) - v.scale_int(3);
    let r_inf = v.scale_int(-2) - u.scale_int(3);
    let r = [&u + &v, u.clone(), &v - &u, v.clone()];

    let s = gauss_sqrt13();
    let half = Rational::new(1.into(), 2.into());
    let targets = [
        CycloElem::from_int(-13) - s.scale_int(2),
        (CycloElem::from_int(-13) + s.scale_int(3)).scale(&half),
        CycloElem::from_int(-13) + s.scale_int(2),
        (CycloElem::from_int(-13) - s.scale_int(3)).scale(&half),
    ];
    const NAMES: [&str; 4] = ["r1", "r2", "r3", "r4"];
    for ((ri, target), name) in r.iter().zip(&targets).zip(NAMES) {
        let sq = ri * ri;
        if &sq != target {
            return Err(CycloError::RadicalSquare { name, got: sq.to_string() });
        }
    }
    Ok(Radicals { theta, r0, r, r_inf })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64) -> CycloElem {
        CycloElem::zeta_power(k)
    }

    #[test]
    fn zeta_times_zeta12_is_one() {
        assert_eq!(z(1) * z(12), CycloElem::one());
    }

    #[test]
    fn zeta12_reduces_to_minus_sum() {
        let expect: [Rational; DIM] = std::array::from_fn(|_| Rational::from_integer((-1).into()));
        assert_eq!(z(12), CycloElem::from_coeffs(&expect));
        assert_eq!(z(13), CycloElem::one());
        assert_eq!(z(0), CycloElem::one());
    }

    #[test]
    fn additive_inverse() {
        let a = CycloElem::one() + z(1);
        assert!((a.clone() + a.neg_ref()).is_zero());
    }

    #[test]
    fn inverse_of_zeta_is_zeta12() {
        assert_eq!(z(1).inv().unwrap(), z(12));
        assert_eq!(CycloElem::zero().inv(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = CycloElem::from_int(i64::MAX) + z(3).scale_int(i64::MAX);
        let sq = &big * &big;
        let back = sq.div(&big).unwrap();
        assert_eq!(back, big);
        assert_eq!(sq.pow(3).div(&sq.pow(2)).unwrap(), sq);
    }

    #[test]
    fn gauss_sum_is_positive_sqrt13() {
        let g = gauss_sqrt13();
        assert_eq!(&g * &g, CycloElem::from_int(13));
        let [a, b, c] = alpha_beta_gamma();
        assert_eq!(a + b + c, g);
        let e = g.embed_complex(12).unwrap();
        assert!((e.re - 13f64.sqrt()).abs() < 1e-11 && e.im.abs() < 1e-11);
    }

    #[test]
    fn period_symmetric_functions() {
        let [t1, t2, t3, t4] = periods();
        assert_eq!(&t1 + &t2 + &t3 + &t4, CycloElem::from_int(-1));
        assert_eq!(&t1 * &t2 * &t3 * &t4, CycloElem::from_int(3));
        for t in periods() {
            let val = t.pow(4) + t.pow(3) + t.pow(2).scale_int(2) - t.scale_int(4)
                + CycloElem::from_int(3);
            assert!(val.is_zero());
        }
    }

    #[test]
    fn galois_square_permutes_periods() {
        let th = periods();
        let mut images: Vec<String> = th.iter().map(|t| t.galois(2).to_canonical()).collect();
        let mut orig: Vec<String> = th.iter().map(CycloElem::to_canonical).collect();
        images.sort();
        orig.sort();
        assert_eq!(images, orig);
        assert_ne!(th[0].galois(2), th[0]);
    }

    #[test]
    fn radical_squares() {
        let rad = periods_and_radicals().unwrap();
        let s = gauss_sqrt13();
        assert_eq!(rad.r(1) * rad.r(1), CycloElem::from_int(-13) - s.scale_int(2));
        let p = rad.r(2) * rad.r(4);
        assert_eq!(&p * &p, CycloElem::from_int(13));
    }

    #[test]
    fn trace_matches_galois_sum() {
        let a = z(1).scale_int(3) + z(5) - CycloElem::from_int(7);
        let mut sum = CycloElem::zero();
        for k in 1..13 {
            sum += a.galois(k);
        }
        assert_eq!(sum.rational_part().unwrap(), a.trace());
    }

    #[test]
    fn canonical_roundtrip() {
        let a = z(3).scale(&Rational::new(5.into(), 7.into())) - z(11);
        let text = a.to_canonical();
        assert_eq!(text.split(' ').count(), 12);
        assert_eq!(text.parse::<CycloElem>().unwrap(), a);
        assert!("1/2 3".parse::<CycloElem>().is_err());
        assert!(CycloElem::parse_canonical("1/0 0 0 0 0 0 0 0 0 0 0 0").is_err());
    }

    #[test]
    fn embedding_of_zeta() {
        let e = z(1).embed_complex(12).unwrap();
        let t = 2.0 * std::f64::consts::PI / 13.0;
        assert!((e.re - t.cos()).abs() < 1e-12 && (e.im - t.sin()).abs() < 1e-12);
        assert!(z(1).embed_complex(30).is_err());
    }
}
