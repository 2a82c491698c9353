//! Sparse polynomials in z₁..z₆ over Q(ζ₁₃).
//!
//! Monomials are packed into a `u64` as `deg | e1 | e2 | … | e6`, one byte
//! each from the high end, so integer order on the key is graded
//! lexicographic order and monomial multiplication is integer addition.
//! Total degree is limited to 255.
//!
//! The group action convention is `substitute_linear(p, M)(z) = p(M z)`, so
//! `substitute_linear(substitute_linear(p, M), N) = substitute_linear(p, M N)`.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::cyclofield::{parse_rational, CycloElem, CycloError, Rational, DIM};
use crate::grouprep::GMatrix;

pub const NVARS: usize = 6;
pub const MAX_DEGREE: u32 = 255;

/// A monomial z₁^e₁ … z₆^e₆.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(u64);

impl Monomial {
    pub fn new(exps: [u8; NVARS]) -> Self {
        let deg: u32 = exps.iter().map(|&e| e as u32).sum();
        assert!(deg <= MAX_DEGREE, "monomial degree {deg} exceeds {MAX_DEGREE}");
        let mut key = (deg as u64) << 48;
        for (i, &e) in exps.iter().enumerate() {
            key |= (e as u64) << (8 * (5 - i));
        }
        Monomial(key)
    }

    pub fn one() -> Self {
        Monomial(0)
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0u8; NVARS];
        e[i] = 1;
        Self::new(e)
    }

    pub fn degree(self) -> u32 {
        (self.0 >> 48) as u32
    }

    pub fn exp(self, i: usize) -> u8 {
        (self.0 >> (8 * (5 - i))) as u8
    }

    pub fn exps(self) -> [u8; NVARS] {
        std::array::from_fn(|i| self.exp(i))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: Monomial) -> Monomial {
        assert!(self.degree() + o.degree() <= MAX_DEGREE, "monomial degree overflow");
        Monomial(self.0 + o.0)
    }

    /// Σ eᵢ wᵢ mod `modulus`.
    pub fn weight(self, w: &[u32; NVARS], modulus: u32) -> u32 {
        (0..NVARS).map(|i| self.exp(i) as u32 * w[i]).sum::<u32>() % modulus
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("malformed polynomial text: {0}")]
    Parse(String),
    #[error("unsupported format header: {0:?}")]
    Header(String),
    #[error(transparent)]
    Coeff(#[from] CycloError),
    #[error("coefficient {0} is not an integer")]
    NotIntegral(String),
    #[error("integer coefficient overflow")]
    Overflow,
}

/// A sparse polynomial. Terms are sorted by ascending graded-lex monomial and
/// carry no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: Vec<(Monomial, CycloElem)>,
}

type Acc = FxHashMap<Monomial, CycloElem>;

fn accumulate(acc: &mut Acc, m: Monomial, c: CycloElem) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Occupied(mut o) => {
            let v = o.get() + &c;
            if v.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = v;
            }
        }
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
    }
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn constant(c: CycloElem) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(CycloElem::one())
    }

    pub fn monomial(m: Monomial, c: CycloElem) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    /// The variable z_{i+1}.
    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i), CycloElem::one())
    }

    /// Collects terms, merging repeated monomials and dropping zeros.
    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, CycloElem)>) -> Self {
        let mut acc = Acc::default();
        for (m, c) in it {
            accumulate(&mut acc, m, c);
        }
        Self::from_acc(acc)
    }

    fn from_acc(acc: Acc) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| t.0);
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, CycloElem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.0.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.first().map(|t| t.0.degree()) == self.terms.last().map(|t| t.0.degree())
    }

    pub fn coefficient(&self, m: Monomial) -> CycloElem {
        match self.terms.binary_search_by_key(&m, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => CycloElem::zero(),
        }
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_rational())
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = Vec::with_capacity(self.len() + o.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < o.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*ma, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        MPoly { terms: out }
    }

    pub fn neg(&self) -> MPoly {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &CycloElem) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_int(&self, k: i64) -> MPoly {
        self.scale(&CycloElem::from_int(k))
    }

    pub fn scale_rational(&self, r: &Rational) -> MPoly {
        self.scale(&CycloElem::from_rational(r))
    }

    /// Applies `f` to every coefficient, dropping results that vanish.
    pub fn map_coeffs(&self, f: impl Fn(&CycloElem) -> CycloElem) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let v = f(c);
                (!v.is_zero()).then_some((*m, v))
            })
            .collect();
        MPoly { terms }
    }

    /// Applies σ_k: ζ ↦ ζ^k to every coefficient.
    pub fn galois(&self, k: i64) -> MPoly {
        self.map_coeffs(|c| c.galois(k))
    }

    /// ∂/∂z_{i+1}.
    pub fn derivative(&self, i: usize) -> MPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(i) > 0).map(|(m, c)| {
            let mut e = m.exps();
            let k = e[i] as i64;
            e[i] -= 1;
            (Monomial::new(e), c.scale_int(k))
        });
        MPoly::from_terms(terms)
    }

    /// Σ_{k=1}^{12} σ_k(self), computed coefficientwise with the field trace.
    pub fn trace(&self) -> MPoly {
        self.map_coeffs(|c| CycloElem::from_rational(&c.trace()))
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        if self.is_zero() || o.is_zero() {
            return MPoly::zero();
        }
        if self.len() == 1 || o.len() == 1 {
            let (single, other) = if self.len() == 1 { (self, o) } else { (o, self) };
            let (m, c) = &single.terms[0];
            let terms = other.terms.iter().map(|(mo, co)| (mo.mul(*m), co * c)).collect();
            return MPoly { terms };
        }
        let mut acc = Acc::default();
        acc.reserve(self.len() * 4);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                accumulate(&mut acc, ma.mul(*mb), ca * cb);
            }
        }
        Self::from_acc(acc)
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The composed polynomial z ↦ p(M z), i.e. zᵢ ↦ Σ_k M_ik z_k.
    pub fn substitute_linear(&self, m: &GMatrix) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        if let Some(pattern) = m.monomial_pattern() {
            return self.substitute_monomial(&pattern);
        }
        let images: Vec<MPoly> = (0..NVARS)
            .map(|i| {
                MPoly::from_terms((0..NVARS).map(|k| (Monomial::var(k), m.get(i, k).clone())))
            })
            .collect();
        let mut max_exp = [0u8; NVARS];
        for (mono, _) in &self.terms {
            for (i, slot) in max_exp.iter_mut().enumerate() {
                *slot = (*slot).max(mono.exp(i));
            }
        }
        let powers: Vec<Vec<MPoly>> = images
            .iter()
            .zip(max_exp)
            .map(|(l, top)| {
                let mut v = vec![MPoly::one()];
                for e in 1..=top as usize {
                    let next = v[e - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();

        // Walk terms in lexicographic exponent order, reusing the longest
        // common prefix of partial products.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_unstable_by_key(|&t| self.terms[t].0.exps());
        let mut prefix: Vec<MPoly> = vec![MPoly::one(); NVARS + 1];
        let mut prev: Option<[u8; NVARS]> = None;
        let mut acc = Acc::default();
        for t in order {
            let (mono, c) = &self.terms[t];
            let e = mono.exps();
            let start = match prev {
                Some(p) => (0..NVARS).find(|&i| p[i] != e[i]).unwrap_or(NVARS),
                None => 0,
            };
            for i in start..NVARS {
                prefix[i + 1] = if e[i] == 0 {
                    prefix[i].clone()
                } else {
                    prefix[i].mul(&powers[i][e[i] as usize])
                };
            }
            prev = Some(e);
            for (m2, c2) in &prefix[NVARS].terms {
                accumulate(&mut acc, *m2, c2 * c);
            }
        }
        Self::from_acc(acc)
    }

    fn substitute_monomial(&self, pattern: &[(usize, CycloElem)]) -> MPoly {
        let mut cache: Vec<Vec<CycloElem>> = pattern.iter().map(|_| vec![CycloElem::one()]).collect();
        let terms = self.terms.iter().map(|(mono, c)| {
            let mut out = [0u8; NVARS];
            let mut coeff = c.clone();
            for (i, (col, entry)) in pattern.iter().enumerate() {
                let e = mono.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                out[*col] += e as u8;
                let powers = &mut cache[i];
                while powers.len() <= e {
                    let next = powers.last().unwrap() * entry;
                    powers.push(next);
                }
                coeff *= &powers[e];
            }
            (Monomial::new(out), coeff)
        });
        MPoly::from_terms(terms.collect::<Vec<_>>())
    }

    /// Exact value at a point, using cached coordinate powers per variable.
    pub fn evaluate(&self, point: &[CycloElem]) -> CycloElem {
        assert_eq!(point.len(), NVARS, "evaluation point must have six coordinates");
        let mut powers: Vec<Vec<CycloElem>> = point.iter().map(|_| vec![CycloElem::one()]).collect();
        let mut sum = CycloElem::zero();
        for (mono, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = mono.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                let p = &mut powers[i];
                while p.len() <= e {
                    let next = p.last().unwrap() * x;
                    p.push(next);
                }
                v *= &p[e];
            }
            sum += &v;
        }
        sum
    }

    /// Parses integer- or rational-coefficient text such as
    /// `2z2z3^2 + z2^2*z6 - 1/3 z1`.
    pub fn parse(s: &str) -> Result<MPoly, PolyError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if compact.is_empty() || compact == "0" {
            return Ok(MPoly::zero());
        }
        let bad = |why: &str| PolyError::Parse(format!("{why} in {s:?}"));
        let bytes = compact.as_bytes();
        let mut pos = 0;
        let mut terms = Vec::new();
        while pos < bytes.len() {
            let mut sign = 1i64;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
            } else if pos > 0 {
                return Err(bad("missing operator"));
            }
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                pos += 1;
            }
            let coeff = if pos > start {
                parse_rational(&compact[start..pos]).map_err(|_| bad("bad coefficient"))?
            } else {
                Rational::from_integer(1.into())
            };
            let mut exps = [0u8; NVARS];
            let mut any_factor = false;
            while pos < bytes.len() && bytes[pos] == b'z' {
                pos += 1;
                let v = bytes.get(pos).copied().ok_or_else(|| bad("dangling z"))?;
                if !(b'1'..=b'6').contains(&v) {
                    return Err(bad("variable index out of range"));
                }
                pos += 1;
                let mut e = 1u32;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let s0 = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    e = compact[s0..pos].parse().map_err(|_| bad("bad exponent"))?;
                }
                let slot = &mut exps[(v - b'1') as usize];
                let total = *slot as u32 + e;
                *slot = u8::try_from(total).map_err(|_| bad("exponent too large"))?;
                any_factor = true;
            }
            if !any_factor && pos == start {
                return Err(bad("empty term"));
            }
            let c = CycloElem::from_rational(&coeff).scale_int(sign);
            terms.push((Monomial::new(exps), c));
        }
        Ok(MPoly::from_terms(terms))
    }

    /// "MPOLY v1" text: header `MPOLY v1 6 <terms>`, then per term six
    /// exponents and twelve `n/d` coordinates, in ascending graded-lex order.
    pub fn to_mpoly_text(&self) -> String {
        let mut out = format!("MPOLY v1 {NVARS} {}\n", self.len());
        for (m, c) in &self.terms {
            let e = m.exps();
            out.push_str(&format!(
                "{} {} {} {} {} {} {}\n",
                e[0],
                e[1],
                e[2],
                e[3],
                e[4],
                e[5],
                c.to_canonical()
            ));
        }
        out
    }

    pub fn from_mpoly_text(text: &str) -> Result<MPoly, PolyError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| PolyError::Header(String::new()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "MPOLY" || h[1] != "v1" || h[2] != "6" {
            return Err(PolyError::Header(header.to_string()));
        }
        let count: usize = h[3].parse().map_err(|_| PolyError::Header(header.to_string()))?;
        let mut terms = Vec::with_capacity(count);
        for line in lines.by_ref().take(count) {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != NVARS + DIM {
                return Err(PolyError::Parse(format!("term line has {} fields", f.len())));
            }
            let mut e = [0u8; NVARS];
            for (slot, s) in e.iter_mut().zip(&f[..NVARS]) {
                *slot = s.parse().map_err(|_| PolyError::Parse(format!("bad exponent {s:?}")))?;
            }
            let c = CycloElem::parse_canonical(&f[NVARS..].join(" "))?;
            terms.push((Monomial::new(e), c));
        }
        if terms.len() != count || lines.any(|l| !l.trim().is_empty()) {
            return Err(PolyError::Parse(format!("expected exactly {count} term lines")));
        }
        let poly = MPoly::from_terms(terms);
        if poly.len() != count {
            return Err(PolyError::Parse("repeated or zero terms".into()));
        }
        Ok(poly)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: String = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{e}", i + 1) })
                .collect::<Vec<_>>()
                .join("*");
            let coeff = match c.rational_part() {
                Some(r) => {
                    let (neg, a) = (r < Rational::from_integer(0.into()), num_traits::Signed::abs(&r));
                    let sign = match (k, neg) {
                        (0, true) => "-",
                        (0, false) => "",
                        (_, true) => " - ",
                        (_, false) => " + ",
                    };
                    let body = if num_traits::One::is_one(&a) && !mono.is_empty() {
                        String::new()
                    } else if mono.is_empty() {
                        a.to_string()
                    } else {
                        format!("{a}*")
                    };
                    format!("{sign}{body}")
                }
                None => {
                    let sign = if k == 0 { "" } else { " + " };
                    if mono.is_empty() {
                        format!("{sign}({c})")
                    } else {
                        format!("{sign}({c})*")
                    }
                }
            };
            write!(f, "{coeff}{mono}")?;
        }
        Ok(())
    }
}

/// A sparse polynomial with integer coefficients, kept in `i128` with every
/// operation checked for overflow.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct ZPoly {
    terms: Vec<(Monomial, i128)>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly::default()
    }

    pub fn one() -> Self {
        ZPoly { terms: vec![(Monomial::one(), 1)] }
    }

    pub fn terms(&self) -> &[(Monomial, i128)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_acc(acc: FxHashMap<Monomial, i128>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|t| t.1 != 0).collect();
        terms.sort_unstable_by_key(|t| t.0);
        ZPoly { terms }
    }

    /// Fails unless every coefficient is a rational integer.
    pub fn from_mpoly(p: &MPoly) -> Result<Self, PolyError> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let r = c.rational_part().filter(|r| r.is_integer());
            let v = r
                .and_then(|r| i128::try_from(r.to_integer()).ok())
                .ok_or_else(|| PolyError::NotIntegral(c.to_string()))?;
            terms.push((*m, v));
        }
        Ok(ZPoly { terms })
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, CycloElem::from_bigint((*c).into()))))
    }

    pub fn add(&self, o: &ZPoly) -> Result<ZPoly, PolyError> {
        let mut acc: FxHashMap<Monomial, i128> = self.terms.iter().copied().collect();
        for (m, c) in &o.terms {
            let e = acc.entry(*m).or_insert(0);
            *e = e.checked_add(*c).ok_or(PolyError::Overflow)?;
        }
        Ok(Self::from_acc(acc))
    }

    pub fn scale(&self, k: i128) -> Result<ZPoly, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| c.checked_mul(k).map(|v| (*m, v)).ok_or(PolyError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ZPoly { terms: terms.into_iter().filter(|t| t.1 != 0).collect() })
    }

    pub fn mul(&self, o: &ZPoly) -> Result<ZPoly, PolyError> {
        let mut acc = FxHashMap::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                mul_acc(&mut acc, ma.mul(*mb), *ca, *cb)?;
            }
        }
        Ok(Self::from_acc(acc))
    }

    pub fn pow(&self, mut e: u32) -> Result<ZPoly, PolyError> {
        let mut base = self.clone();
        let mut acc = ZPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Terms whose weight is `target`.
    pub fn weight_part(&self, w: &[u32; NVARS], modulus: u32, target: u32) -> ZPoly {
        let terms = self.terms.iter().filter(|t| t.0.weight(w, modulus) == target).copied().collect();
        ZPoly { terms }
    }

    /// The weight-`target` part of `self · o`, without forming the rest.
    pub fn mul_weight_part(
        &self,
        o: &ZPoly,
        w: &[u32; NVARS],
        modulus: u32,
        target: u32,
    ) -> Result<ZPoly, PolyError> {
        let mut buckets: Vec<Vec<(Monomial, i128)>> = vec![Vec::new(); modulus as usize];
        for t in &o.terms {
            buckets[t.0.weight(w, modulus) as usize].push(*t);
        }
        let mut acc = FxHashMap::default();
        for (ma, ca) in &self.terms {
            let need = (target + modulus - ma.weight(w, modulus)) % modulus;
            for (mb, cb) in &buckets[need as usize] {
                mul_acc(&mut acc, ma.mul(*mb), *ca, *cb)?;
            }
        }
        Ok(Self::from_acc(acc))
    }
}

fn mul_acc(acc: &mut FxHashMap<Monomial, i128>, m: Monomial, a: i128, b: i128) -> Result<(), PolyError> {
    let p = a.checked_mul(b).ok_or(PolyError::Overflow)?;
    let e = acc.entry(m).or_insert(0);
    *e = e.checked_add(p).ok_or(PolyError::Overflow)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    #[test]
    fn derivative_rule() {
        let p = MPoly::parse("3z1^2z2+z2^5-7").unwrap();
        assert_eq!(p.derivative(0), MPoly::parse("6z1z2").unwrap());
        assert_eq!(p.derivative(1), MPoly::parse("3z1^2+5z2^4").unwrap());
        assert!(p.derivative(4).is_zero());
    }

    #[test]
    fn zpoly_weight_part_product() {
        let x = ZPoly::from_mpoly(&MPoly::parse("z1+2z2-z3").unwrap()).unwrap();
        let w = [1, 2, 0, 0, 0, 0];
        let full = x.pow(3).unwrap();
        let part = x.pow(2).unwrap().mul_weight_part(&x, &w, 3, 0).unwrap();
        assert_eq!(part, full.weight_part(&w, 3, 0));
        assert!(!part.is_empty());
        assert!(ZPoly::from_mpoly(&MPoly::parse("1/2z1").unwrap()).is_err());
        let big = ZPoly::from_mpoly(&MPoly::parse("100000000000000000000z1").unwrap()).unwrap();
        assert_eq!(big.mul(&big), Err(PolyError::Overflow));
    }

    use super::*;

    fn p(s: &str) -> MPoly {
        MPoly::parse(s).unwrap()
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let a = Monomial::new([2, 0, 0, 0, 0, 0]);
        let b = Monomial::new([1, 1, 0, 0, 0, 0]);
        let c = Monomial::new([0, 0, 0, 0, 0, 3]);
        assert!(b < a && a < c);
        assert_eq!(a.mul(b).exps(), [3, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn binomial_square() {
        assert_eq!(p("z1+z2").pow(2), p("z1^2+2z1z2+z2^2"));
        assert!(p("z1+z2").mul(&MPoly::zero()).is_zero());
    }

    #[test]
    fn multinomial_coefficient_of_cube() {
        let a0 = p("z1z4+z2z5+z3z6");
        let cube = a0.pow(3);
        assert_eq!(cube.degree(), 6);
        let m = Monomial::new([1, 1, 1, 1, 1, 1]);
        assert_eq!(cube.coefficient(m), CycloElem::from_int(6));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(MPoly::parse("z7").is_err());
        assert!(MPoly::parse("2x").is_err());
        assert_eq!(p("0"), MPoly::zero());
        assert_eq!(p("-1/2 z1^2 + z1*z1"), p("1/2z1^2"));
    }

    #[test]
    fn evaluate_small_points() {
        let ones = vec![CycloElem::one(); 6];
        assert_eq!(p("z1z4+z2z5+z3z6").evaluate(&ones), CycloElem::from_int(3));
        let pt: Vec<CycloElem> = [2, 1, 1, 0, 0, 0].iter().map(|&x| CycloElem::from_int(x)).collect();
        assert_eq!(p("z1z2z3").evaluate(&pt), CycloElem::from_int(2));
    }

    #[test]
    fn text_roundtrip_and_header() {
        let a3 = p("z2^2-2z1z5");
        let text = a3.to_mpoly_text();
        assert_eq!(MPoly::from_mpoly_text(&text).unwrap(), a3);
        assert_eq!(MPoly::zero().to_mpoly_text(), "MPOLY v1 6 0\n");
        assert!(MPoly::from_mpoly_text(&text.replace("v1", "v2")).is_err());
        let broken = text.replace("0/1", "x/1");
        assert!(MPoly::from_mpoly_text(&broken).is_err());
    }

    #[test]
    fn display_reads_back() {
        let q = p("-z6^3+z2^2z4-2z2z5^2+z1z4z5+3z3z5z6");
        assert_eq!(MPoly::parse(&q.to_string()).unwrap(), q);
    }
}
