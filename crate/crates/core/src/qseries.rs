//! Truncated q-expansions with fractional exponents.
//!
//! A series stores coefficients at exponents `n/den` for integer `n` and an
//! absolute precision `prec`: every coefficient with `n < prec` is known
//! exactly, nothing at or above it is. Products track precision as
//! `min(prec_f + val_g, prec_g + val_f)`, so series with negative valuation
//! (such as j) never report undetermined coefficients.

use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cyclofield::{CycloElem, Rational};
use crate::grouprep::GMatrix;
use crate::invariants::{build_forms, G_TERMS, INF};
use crate::polyring::{MPoly, Monomial, ZPoly, NVARS};
use crate::report::CheckResult;

/// Exponent denominator for the order-13 theta system: lcm(104, 24).
pub const DEN13: i64 = 312;
/// Exponent denominator for the order-5 theta pair: lcm(40, 24).
pub const DEN5: i64 = 120;
/// Default truncation in integer q-orders.
pub const DEFAULT_ORDER: u32 = 12;

/// Characteristic numerators of a₁..a₆.
pub const THETA13_CHARS: [i64; 6] = [11, 7, 5, 3, 9, 1];
/// Overall sign of a₁..a₆.
pub const THETA13_SIGNS: [i64; 6] = [1, 1, 1, -1, 1, 1];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("cannot invert a series whose leading coefficient is not a unit")]
    NonUnitLeading,
    #[error("cannot invert a series with no known nonzero coefficient")]
    ZeroSeries,
    #[error("unsupported characteristic denominator {0} (expected 5 or 13)")]
    UnsupportedDenominator(i64),
    #[error("exponent denominator {den} is not a multiple of {needed}")]
    DenominatorMismatch { den: i64, needed: i64 },
    #[error("malformed series text: {0}")]
    Parse(String),
    #[error("unsupported series header: {0:?}")]
    Header(String),
    #[error("theta tail bound {tail:e} exceeds tolerance {tol:e}")]
    NonConvergence { tail: f64, tol: f64 },
}

/// Coefficient ring of a series.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `self += a · b`.
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self = self.plus(&a.times(b));
    }
    /// Multiplicative inverse when it exists in the ring.
    fn unit_inverse(&self) -> Option<Self>;
    fn to_cyclo(&self) -> CycloElem;
    fn from_cyclo(c: &CycloElem) -> Option<Self>;
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        v.into()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn unit_inverse(&self) -> Option<Self> {
        (self.abs() == One::one()).then(|| self.clone())
    }
    fn to_cyclo(&self) -> CycloElem {
        CycloElem::from_bigint(self.clone())
    }
    fn from_cyclo(c: &CycloElem) -> Option<Self> {
        c.rational_part().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn to_cyclo(&self) -> CycloElem {
        CycloElem::from_rational(self)
    }
    fn from_cyclo(c: &CycloElem) -> Option<Self> {
        c.rational_part()
    }
}

impl Coeff for CycloElem {
    fn zero() -> Self {
        CycloElem::zero()
    }
    fn one() -> Self {
        CycloElem::one()
    }
    fn from_i64(v: i64) -> Self {
        CycloElem::from_int(v)
    }
    fn is_zero(&self) -> bool {
        CycloElem::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn to_cyclo(&self) -> CycloElem {
        self.clone()
    }
    fn from_cyclo(c: &CycloElem) -> Option<Self> {
        Some(c.clone())
    }
}

/// Exponent grid and truncation shared by every series of one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeriesContext {
    pub den: i64,
    /// Coefficients are kept through q^order inclusive.
    pub order: u32,
}

impl SeriesContext {
    pub fn order13(order: u32) -> Self {
        SeriesContext { den: DEN13, order }
    }

    pub fn order5(order: u32) -> Self {
        SeriesContext { den: DEN5, order }
    }

    /// Exclusive numerator bound.
    pub fn prec(&self) -> i64 {
        self.den * self.order as i64 + 1
    }
}

/// A truncated q-expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExp<C> {
    den: i64,
    prec: i64,
    /// Sorted by exponent numerator, no zeros, all below `prec`.
    terms: Vec<(i64, C)>,
}

pub type ZSeries = QExp<BigInt>;
pub type QSeries = QExp<Rational>;

impl<C: Coeff> QExp<C> {
    pub fn zero(den: i64, prec: i64) -> Self {
        QExp { den, prec, terms: Vec::new() }
    }

    pub fn one(den: i64, prec: i64) -> Self {
        Self::monomial(den, prec, 0, C::one())
    }

    pub fn monomial(den: i64, prec: i64, e: i64, c: C) -> Self {
        Self::from_terms(den, prec, [(e, c)])
    }

    /// Sums repeated exponents and drops everything at or above `prec`.
    pub fn from_terms(den: i64, prec: i64, it: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut map = std::collections::BTreeMap::<i64, C>::new();
        for (e, c) in it {
            if e >= prec {
                continue;
            }
            map.entry(e).and_modify(|v| *v = v.plus(&c)).or_insert(c);
        }
        let terms = map.into_iter().filter(|t| !t.1.is_zero()).collect();
        QExp { den, prec, terms }
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn terms(&self) -> &[(i64, C)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least numerator with a nonzero coefficient; `prec` for the zero series.
    pub fn valuation(&self) -> i64 {
        self.terms.first().map_or(self.prec, |t| t.0)
    }

    pub fn leading(&self) -> Option<(i64, &C)> {
        self.terms.first().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> C {
        self.terms
            .binary_search_by_key(&e, |t| t.0)
            .map_or_else(|_| C::zero(), |i| self.terms[i].1.clone())
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        let terms = self.terms.iter().filter(|t| t.0 < prec).cloned().collect();
        QExp { den: self.den, prec, terms }
    }

    fn check_den(&self, o: &Self) {
        assert_eq!(self.den, o.den, "series from different exponent grids combined");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_den(o);
        let prec = self.prec.min(o.prec);
        let (mut i, mut j) = (0, 0);
        let mut terms = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() || j < b.len() {
            let (e, c) = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    i += 1;
                    j += 1;
                    (x.0, x.1.plus(&y.1))
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    i += 1;
                    x.clone()
                }
                (Some(x), None) => {
                    i += 1;
                    x.clone()
                }
                (_, Some(y)) => {
                    j += 1;
                    y.clone()
                }
                (None, None) => unreachable!(),
            };
            if e < prec && !c.is_zero() {
                terms.push((e, c));
            }
        }
        QExp { den: self.den, prec, terms }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negated())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.times(k)))
            .filter(|t| !t.1.is_zero())
            .collect();
        QExp { den: self.den, prec: self.prec, terms }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&C::from_i64(k))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> QExp<D> {
        let terms = self.terms.iter().map(|(e, c)| (*e, f(c))).filter(|t| !t.1.is_zero()).collect();
        QExp { den: self.den, prec: self.prec, terms }
    }

    /// Multiplication by q^{k/den}.
    pub fn shift(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect();
        QExp { den: self.den, prec: self.prec + k, terms }
    }

    fn product_prec(&self, o: &Self) -> i64 {
        (self.prec + o.valuation()).min(o.prec + self.valuation())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_filtered(o, None)
    }

    /// Only the terms of `self · o` whose numerator is `residue` mod `modulus`.
    pub fn mul_class(&self, o: &Self, modulus: i64, residue: i64) -> Self {
        self.mul_filtered(o, Some((modulus, residue.rem_euclid(modulus))))
    }

    fn mul_filtered(&self, o: &Self, class: Option<(i64, i64)>) -> Self {
        self.check_den(o);
        let prec = self.product_prec(o);
        if self.is_zero() || o.is_zero() {
            return QExp::zero(self.den, prec);
        }
        let base = self.valuation() + o.valuation();
        if base >= prec {
            return QExp::zero(self.den, prec);
        }
        let mut acc: Vec<C> = vec![C::zero(); (prec - base) as usize];
        match class {
            None => {
                for (ea, ca) in &self.terms {
                    for (eb, cb) in &o.terms {
                        let e = ea + eb;
                        if e >= prec {
                            break;
                        }
                        acc[(e - base) as usize].add_product(ca, cb);
                    }
                }
            }
            Some((modulus, residue)) => {
                let mut buckets: Vec<Vec<&(i64, C)>> = vec![Vec::new(); modulus as usize];
                for t in &o.terms {
                    buckets[t.0.rem_euclid(modulus) as usize].push(t);
                }
                for (ea, ca) in &self.terms {
                    let need = (residue - ea).rem_euclid(modulus) as usize;
                    for (eb, cb) in &buckets[need] {
                        let e = ea + eb;
                        if e >= prec {
                            break;
                        }
                        acc[(e - base) as usize].add_product(ca, cb);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (base + i as i64, c))
            .collect();
        QExp { den: self.den, prec, terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QExp::one(self.den, i64::MAX / 4);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        if acc.prec == i64::MAX / 4 {
            acc.prec = self.prec.max(0);
        }
        acc
    }

    /// 1/self, for a series whose leading coefficient is a unit. The result
    /// has valuation −v and the same relative precision as `self`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let (v, lead) = self.leading().ok_or(SeriesError::ZeroSeries)?;
        let lead_inv = lead.unit_inverse().ok_or(SeriesError::NonUnitLeading)?;
        let rel = self.prec - v;
        // u = self / q^v = lead (1 + r); solve u·w = 1 term by term.
        let u: Vec<(i64, C)> = self.terms.iter().map(|(e, c)| (e - v, c.clone())).collect();
        let mut w: Vec<C> = vec![C::zero(); rel as usize];
        w[0] = lead_inv.clone();
        for n in 1..rel {
            let mut s = C::zero();
            for (e, c) in u.iter().skip(1) {
                if *e > n {
                    break;
                }
                s.add_product(c, &w[(n - e) as usize]);
            }
            w[n as usize] = s.negated().times(&lead_inv);
        }
        let terms = w
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 - v, c))
            .collect();
        Ok(QExp { den: self.den, prec: rel - v, terms })
    }

    /// Equal on every exponent known in both.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.first_difference(o).is_none()
    }

    /// First exponent below both precisions where the series differ.
    pub fn first_difference(&self, o: &Self) -> Option<(i64, C, C)> {
        let prec = self.prec.min(o.prec);
        let d = self.truncate(prec).sub(&o.truncate(prec));
        d.leading().map(|(e, _)| (e, self.coeff(e), o.coeff(e)))
    }

    /// The common class of all exponents, rescaled to denominator `den`,
    /// modulo `modulus`; `None` if the classes are mixed or an exponent is
    /// not on the coarser grid.
    pub fn residue_class(&self, den: i64, modulus: i64) -> Option<i64> {
        if self.den % den != 0 {
            return None;
        }
        let f = self.den / den;
        let mut class = None;
        for (e, _) in &self.terms {
            if e % f != 0 {
                return None;
            }
            let r = (e / f).rem_euclid(modulus);
            match class {
                None => class = Some(r),
                Some(c) if c != r => return None,
                _ => {}
            }
        }
        class
    }

    /// Human-readable expansion: one `q^{n/d}: c` line per term.
    pub fn format_expansion(&self) -> String {
        if self.terms.is_empty() {
            return "0\n".to_string();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            out.push_str(&format!("{}: {}\n", format_exponent(*e, self.den), c));
        }
        out
    }

    pub fn to_qexp_text(&self) -> String {
        let mut out = format!("QEXP v1 {} {} {}\n", self.den, self.prec, self.terms.len());
        for (e, c) in &self.terms {
            out.push_str(&format!("{}\t{}\n", e, c.to_cyclo().to_canonical()));
        }
        out
    }

    pub fn from_qexp_text(text: &str) -> Result<Self, SeriesError> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 5 || h[0] != "QEXP" || h[1] != "v1" {
            return Err(SeriesError::Header(header.to_string()));
        }
        let num = |s: &str| s.parse::<i64>().map_err(|_| SeriesError::Header(header.to_string()));
        let (den, prec, count) = (num(h[2])?, num(h[3])?, num(h[4])?);
        let mut terms = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (e, rest) = line.split_once('\t').ok_or_else(|| SeriesError::Parse(line.to_string()))?;
            let e: i64 = e.trim().parse().map_err(|_| SeriesError::Parse(line.to_string()))?;
            let c = CycloElem::parse_canonical(rest).map_err(|err| SeriesError::Parse(err.to_string()))?;
            let c = C::from_cyclo(&c).ok_or_else(|| SeriesError::Parse(format!("coefficient out of ring: {line}")))?;
            terms.push((e, c));
        }
        if terms.len() as i64 != count {
            return Err(SeriesError::Parse(format!("expected {count} terms, found {}", terms.len())));
        }
        if terms.windows(2).any(|w| w[0].0 >= w[1].0) || terms.iter().any(|t| t.0 >= prec || t.1.is_zero()) {
            return Err(SeriesError::Parse("terms not canonical".to_string()));
        }
        Ok(QExp { den, prec, terms })
    }
}

/// `q^e` for single-character exponents, `q^{e}` otherwise.
pub fn format_exponent(n: i64, den: i64) -> String {
    let g = n.gcd(&den);
    let (p, q) = (n / g, den / g);
    let s = if q == 1 { p.to_string() } else { format!("{p}/{q}") };
    if s.len() == 1 {
        format!("q^{s}")
    } else {
        format!("q^{{{s}}}")
    }
}

impl<C: Coeff> fmt::Display for QExp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "O({})", format_exponent(self.prec, self.den));
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){}", format_exponent(*e, self.den))?;
        }
        write!(f, " + O({})", format_exponent(self.prec, self.den))
    }
}

pub fn to_rational(s: &ZSeries) -> QSeries {
    s.map(|c| Rational::from_integer(c.clone()))
}

/// e^{∓kπi/(2·level)} θ[k/level; 1](0, level·z): Σ_n (−1)^n q^{k²/(8·level) + (level n² + k n)/2}.
pub fn theta_characteristic(k: i64, level: i64, ctx: SeriesContext) -> Result<ZSeries, SeriesError> {
    if level != 5 && level != 13 {
        return Err(SeriesError::UnsupportedDenominator(level));
    }
    if ctx.den % (8 * level) != 0 {
        return Err(SeriesError::DenominatorMismatch { den: ctx.den, needed: 8 * level });
    }
    let prec = ctx.prec();
    let unit = ctx.den / (8 * level);
    let exponent = |n: i64| unit * k * k + ctx.den / 2 * (level * n * n + k * n);
    let mut terms = Vec::new();
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { 0 } else { -1 };
        loop {
            let e = exponent(n);
            if e >= prec {
                break;
            }
            terms.push((e, BigInt::from(if n % 2 == 0 { 1 } else { -1 })));
            n += dir;
        }
    }
    Ok(QExp::from_terms(ctx.den, prec, terms))
}

/// a₁..a₆ on the order-13 grid.
pub fn theta_vector13(ctx: SeriesContext) -> Result<Vec<ZSeries>, SeriesError> {
    THETA13_CHARS
        .iter()
        .zip(THETA13_SIGNS)
        .map(|(&k, s)| Ok(theta_characteristic(k, 13, ctx)?.scale_int(s)))
        .collect()
}

/// (a, b) on the order-5 grid.
pub fn theta_pair5(ctx: SeriesContext) -> Result<[ZSeries; 2], SeriesError> {
    Ok([theta_characteristic(3, 5, ctx)?, theta_characteristic(1, 5, ctx)?])
}

/// q^{1/24} Π (1 − qⁿ) through the pentagonal-number expansion.
pub fn eta_series(ctx: SeriesContext) -> Result<ZSeries, SeriesError> {
    if ctx.den % 24 != 0 {
        return Err(SeriesError::DenominatorMismatch { den: ctx.den, needed: 24 });
    }
    let prec = ctx.prec();
    let mut terms = Vec::new();
    for dir in [1i64, -1] {
        let mut k = if dir == 1 { 0 } else { -1 };
        loop {
            let e = ctx.den / 24 + ctx.den * (k * (3 * k - 1) / 2);
            if e >= prec {
                break;
            }
            terms.push((e, BigInt::from(if k % 2 == 0 { 1 } else { -1 })));
            k += dir;
        }
    }
    Ok(QExp::from_terms(ctx.den, prec, terms))
}

pub fn delta_series(ctx: SeriesContext) -> Result<ZSeries, SeriesError> {
    Ok(eta_series(ctx)?.pow(24))
}

fn divisor_power_sum(n: i64, k: u32) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(k)).sum()
}

/// E₄ = 1 + 240 Σ σ₃(n) qⁿ or E₆ = 1 − 504 Σ σ₅(n) qⁿ.
pub fn eisenstein(weight: u32, ctx: SeriesContext) -> Result<ZSeries, SeriesError> {
    let (c, k) = match weight {
        4 => (240, 3),
        6 => (-504, 5),
        _ => return Err(SeriesError::Parse(format!("no Eisenstein series of weight {weight}"))),
    };
    let terms = std::iter::once((0, BigInt::from(1)))
        .chain((1..=ctx.order as i64).map(|n| (n * ctx.den, divisor_power_sum(n, k) * c)));
    Ok(QExp::from_terms(ctx.den, ctx.prec(), terms))
}

/// j = E₄³/Δ, with Δ computed two orders deeper so j is known through the
/// context order.
pub fn j_series(ctx: SeriesContext) -> Result<ZSeries, SeriesError> {
    let deep = SeriesContext { den: ctx.den, order: ctx.order + 2 };
    let j = eisenstein(4, deep)?.pow(3).mul(&delta_series(deep)?.inverse()?);
    Ok(j.truncate(ctx.prec()))
}

/// Σ c · Π vᵢ^{eᵢ} with cached variable powers.
pub fn evaluate_terms<C: Coeff>(
    terms: impl IntoIterator<Item = (Monomial, C)>,
    vars: &[QExp<C>],
) -> QExp<C> {
    assert_eq!(vars.len(), NVARS, "six series expected");
    let den = vars[0].den();
    let prec = vars.iter().map(|v| v.prec()).min().unwrap_or(0);
    let mut cache: Vec<Vec<QExp<C>>> = vars.iter().map(|v| vec![QExp::one(den, prec), v.clone()]).collect();
    let mut acc = QExp::zero(den, prec);
    let mut first = true;
    for (m, c) in terms {
        let mut t: Option<QExp<C>> = None;
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while cache[i].len() <= e as usize {
                let next = cache[i].last().unwrap().mul(&vars[i]);
                cache[i].push(next);
            }
            let p = &cache[i][e as usize];
            t = Some(match t {
                None => p.clone(),
                Some(s) => s.mul(p),
            });
        }
        let t = t.unwrap_or_else(|| QExp::one(den, prec)).scale(&c);
        acc = if first { t } else { acc.add(&t) };
        first = false;
    }
    acc
}

/// p(v₁, …, v₆) over Q(ζ₁₃).
pub fn evaluate_poly_on_series(p: &MPoly, vars: &[QExp<CycloElem>]) -> QExp<CycloElem> {
    if p.is_zero() {
        let den = vars[0].den();
        return QExp::zero(den, vars.iter().map(|v| v.prec()).min().unwrap_or(0));
    }
    evaluate_terms(p.terms().iter().cloned(), vars)
}

/// p(v₁, …, v₆) for an integer polynomial.
pub fn evaluate_zpoly_on_series(p: &ZPoly, vars: &[ZSeries]) -> ZSeries {
    if p.is_empty() {
        let den = vars[0].den();
        return QExp::zero(den, vars.iter().map(|v| v.prec()).min().unwrap_or(0));
    }
    evaluate_terms(p.terms().iter().map(|(m, c)| (*m, BigInt::from(*c))), vars)
}

/// Numerator class (mod [`DEN13`]) of the T-invariant part of a degree-`d`
/// expression in a₁..a₆.
pub fn invariant_exponent_class(degree: u32) -> i64 {
    (195 * degree as i64).rem_euclid(DEN13)
}

#[derive(Default)]
struct PowerCache {
    w0: Vec<ZSeries>,
    d0: Vec<ZSeries>,
    w_inf: Vec<ZSeries>,
    d_inf: Vec<ZSeries>,
    eta: Vec<ZSeries>,
}

fn cached_power(cache: &mut Vec<ZSeries>, base: &ZSeries, e: u32) -> ZSeries {
    if cache.is_empty() {
        cache.push(QExp::one(base.den(), base.prec().max(0)));
    }
    while cache.len() <= e as usize {
        let next = cache.last().unwrap().mul(base);
        cache.push(next);
    }
    cache[e as usize].clone()
}

/// The order-13 theta vector with every form family and the fourteen-point
/// series, ready for power sums.
pub struct ThetaSystem {
    pub ctx: SeriesContext,
    pub a: Vec<ZSeries>,
    pub eta: ZSeries,
    pub a_forms: Vec<ZSeries>,
    pub d_forms: Vec<ZSeries>,
    pub g_forms: Vec<ZSeries>,
    w0: ZSeries,
    d0: ZSeries,
    w_inf: ZSeries,
    d_inf: ZSeries,
    cache: Mutex<PowerCache>,
}

impl ThetaSystem {
    pub fn new(ctx: SeriesContext) -> Result<Self, SeriesError> {
        let a = theta_vector13(ctx)?;
        let eta = eta_series(ctx)?;
        let forms = build_forms();
        let on_a = |p: &MPoly| evaluate_zpoly_on_series(&ZPoly::from_mpoly(p).expect("forms are integral"), &a);
        let a_forms: Vec<ZSeries> = forms.a.iter().map(on_a).collect();
        let d_forms: Vec<ZSeries> = forms.d.iter().map(on_a).collect();
        let mut g_forms = vec![d_forms[0].pow(2).add(&d_forms[INF].pow(2))];
        for terms in &G_TERMS {
            let mut acc = QExp::zero(ctx.den, ctx.prec());
            for &(c, i, j) in terms {
                acc = acc.add(&d_forms[i].mul(&d_forms[j]).scale_int(c));
            }
            g_forms.push(acc);
        }
        let phi0 = a_forms.iter().skip(1).fold(a_forms[0].clone(), |s, x| s.add(x));
        let w0 = phi0.pow(2);
        let d0 = g_forms.iter().skip(1).fold(g_forms[0].scale_int(-13), |s, x| s.add(x));
        let w_inf = a_forms[0].pow(2).scale_int(13);
        let d_inf = g_forms[0].scale_int(169);
        Ok(ThetaSystem {
            ctx,
            a,
            eta,
            a_forms,
            d_forms,
            g_forms,
            w0,
            d0,
            w_inf,
            d_inf,
            cache: Mutex::new(PowerCache::default()),
        })
    }

    /// η^k.
    pub fn eta_power(&self, k: u32) -> ZSeries {
        let mut c = self.cache.lock().expect("cache lock");
        cached_power(&mut c.eta, &self.eta, k)
    }

    /// Un-normalized Φ_{m,n}(a₁, …, a₆). The finite points form one T-orbit,
    /// so their contribution is 13 times the T-invariant exponent class of
    /// w₀^m δ₀^n.
    pub fn power_sum_on_a(&self, m: u32, n: u32) -> ZSeries {
        let mut c = self.cache.lock().expect("cache lock");
        let at_inf = cached_power(&mut c.w_inf, &self.w_inf, m).mul(&cached_power(&mut c.d_inf, &self.d_inf, n));
        let class = invariant_exponent_class(4 * m + 6 * n);
        let finite = match (m, n) {
            (0, 0) => QExp::one(self.ctx.den, self.ctx.prec()),
            (_, 0) => cached_power(&mut c.w0, &self.w0, m - 1).mul_class(&self.w0, DEN13, class),
            _ => cached_power(&mut c.w0, &self.w0, m)
                .mul(&cached_power(&mut c.d0, &self.d0, n - 1))
                .mul_class(&self.d0, DEN13, class),
        };
        at_inf.add(&finite.scale_int(13))
    }

    /// Un-normalized Φ_{m,n} on ηᵏ·(a₁, …, a₆); k = 1, 3, 9 give x, y, u.
    pub fn power_sum_on_eta_multiple(&self, m: u32, n: u32, k: u32) -> ZSeries {
        let on_a = self.power_sum_on_a(m, n);
        self.eta_power(k * (4 * m + 6 * n)).mul(&on_a)
    }

    /// Un-normalized Φ_{m,n}(x₁, …, x₆).
    pub fn power_sum_on_x(&self, m: u32, n: u32) -> ZSeries {
        self.power_sum_on_eta_multiple(m, n, 1)
    }
}

/// a₁(z)..a₆(z) numerically, summing |n| ≤ `terms`, with the first omitted
/// term's magnitude as a tail estimate.
pub fn numeric_theta_vector(z: Complex64, terms: i64) -> ([Complex64; 6], f64) {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut out = [Complex64::new(0.0, 0.0); 6];
    let mut tail: f64 = 0.0;
    for (i, (&k, s)) in THETA13_CHARS.iter().zip(THETA13_SIGNS).enumerate() {
        let k = k as f64;
        let exponent = |n: f64| k * k / 104.0 + (13.0 * n * n + k * n) / 2.0;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in -terms..=terms {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += (two_pi_i * z * exponent(n as f64)).exp() * sign;
        }
        out[i] = acc * s as f64;
        for n in [-(terms + 1), terms + 1] {
            tail = tail.max((two_pi_i * z * exponent(n as f64)).exp().norm());
        }
    }
    (out, tail)
}

/// Max componentwise |A(−1/z) − e^{πi/4} √z S A(z)|, principal √z.
pub fn inversion_deviation(s: &GMatrix, z: Complex64, terms: i64, tol: f64) -> Result<f64, SeriesError> {
    let (az, tail1) = numeric_theta_vector(z, terms);
    let (am, tail2) = numeric_theta_vector(-z.inv(), terms);
    let tail = tail1.max(tail2);
    if tail > tol {
        return Err(SeriesError::NonConvergence { tail, tol });
    }
    let factor = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4) * z.sqrt();
    let mut worst: f64 = 0.0;
    for (i, lhs) in am.iter().enumerate() {
        let sa: Complex64 = az.iter().enumerate().map(|(k, a)| s.get(i, k).to_complex() * a).sum();
        worst = worst.max((lhs - factor * sa).norm());
    }
    Ok(worst)
}

/// Numeric check of the inversion law at one point.
pub fn verify_inversion_law(s: &GMatrix, z: Complex64, tol: f64) -> CheckResult {
    let name = format!("theta inversion law at z = {}{:+}i", z.re, z.im);
    let r = match inversion_deviation(s, z, 40, tol) {
        Ok(dev) => CheckResult::new(name, dev < tol, format!("max deviation {dev:.3e} (tolerance {tol:.0e})")),
        Err(e) => CheckResult::new(name, false, e.to_string()),
    };
    r.cite("theta vector under z -> -1/z")
}
