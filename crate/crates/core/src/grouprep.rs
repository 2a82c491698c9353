//! The six-dimensional representation of SL(2,13) generated by S and T.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclofield::{gauss_sqrt13, CycloElem, Rational};
use crate::report::CheckResult;

pub const N: usize = 6;

/// A 6×6 matrix over Q(ζ₁₃), row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GMatrix {
    e: Vec<CycloElem>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
}

impl GMatrix {
    pub fn from_fn(f: impl Fn(usize, usize) -> CycloElem) -> Self {
        let e = (0..N * N).map(|k| f(k / N, k % N)).collect();
        GMatrix { e }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { CycloElem::one() } else { CycloElem::zero() })
    }

    pub fn diagonal(d: &[CycloElem; N]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { CycloElem::zero() })
    }

    /// Integer matrix from rows.
    pub fn from_int_rows(rows: [[i64; N]; N]) -> Self {
        Self::from_fn(|i, j| CycloElem::from_int(rows[i][j]))
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloElem {
        &self.e[i * N + j]
    }

    pub fn row(&self, i: usize) -> &[CycloElem] {
        &self.e[i * N..(i + 1) * N]
    }

    pub fn mul(&self, rhs: &GMatrix) -> GMatrix {
        let mut out = vec![CycloElem::zero(); N * N];
        for i in 0..N {
            for k in 0..N {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..N {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out[i * N + j] += &(a * b);
                    }
                }
            }
        }
        GMatrix { e: out }
    }

    pub fn pow(&self, mut k: u32) -> GMatrix {
        let mut base = self.clone();
        let mut acc = GMatrix::identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn neg(&self) -> GMatrix {
        GMatrix { e: self.e.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, c: &CycloElem) -> GMatrix {
        GMatrix { e: self.e.iter().map(|x| x * c).collect() }
    }

    pub fn transpose(&self) -> GMatrix {
        Self::from_fn(|i, j| self.get(j, i).clone())
    }

    /// Matrix-vector product M·x.
    pub fn apply(&self, x: &[CycloElem]) -> Vec<CycloElem> {
        (0..N)
            .map(|i| {
                let mut s = CycloElem::zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    /// For a matrix with exactly one nonzero entry per row, returns
    /// (column, entry) for each row.
    pub fn monomial_pattern(&self) -> Option<Vec<(usize, CycloElem)>> {
        (0..N)
            .map(|i| {
                let mut nz = self.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero());
                let first = nz.next()?;
                nz.next().is_none().then(|| (first.0, first.1.clone()))
            })
            .collect()
    }

    /// The 36 canonical entry strings, tab-separated.
    pub fn to_canonical(&self) -> String {
        self.e.iter().map(CycloElem::to_canonical).collect::<Vec<_>>().join("\t")
    }
}

/// Displayed entries of S before the scalar factor: entry (i,j) is ζ^a − ζ^b.
const S_PATTERN: [[(i64, i64); N]; N] = [
    [(12, 1), (10, 3), (4, 9), (5, 8), (2, 11), (6, 7)],
    [(10, 3), (4, 9), (12, 1), (2, 11), (6, 7), (5, 8)],
    [(4, 9), (12, 1), (10, 3), (6, 7), (5, 8), (2, 11)],
    [(5, 8), (2, 11), (6, 7), (1, 12), (3, 10), (9, 4)],
    [(2, 11), (6, 7), (5, 8), (3, 10), (9, 4), (1, 12)],
    [(6, 7), (5, 8), (2, 11), (9, 4), (1, 12), (3, 10)],
];

/// Exponents of the diagonal of T.
pub const T_EXPONENTS: [i64; N] = [7, 11, 8, 6, 2, 5];

/// The signed permutation matrix displayed for the word element H.
pub const H_DISPLAYED: [[i64; N]; N] = [
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, -1, 0, 0, 0],
    [-1, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0],
];

#[derive(Clone, Debug)]
pub struct Generators {
    pub s: GMatrix,
    pub t: GMatrix,
}

/// √13·S, which has entries in Z[ζ]: entry (i,j) is −(ζ^a − ζ^b).
pub fn sqrt13_s() -> GMatrix {
    GMatrix::from_fn(|i, j| {
        let (a, b) = S_PATTERN[i][j];
        CycloElem::zeta_power(b) - CycloElem::zeta_power(a)
    })
}

/// S with scalar −1/√13 realized as −g/13, and T = diag(ζ^7, …, ζ^5).
pub fn build_generators() -> Generators {
    let scalar = gauss_sqrt13().scale(&Rational::new((-1).into(), 13.into()));
    let s = GMatrix::from_fn(|i, j| {
        let (a, b) = S_PATTERN[i][j];
        (CycloElem::zeta_power(a) - CycloElem::zeta_power(b)) * &scalar
    });
    let t = GMatrix::diagonal(&T_EXPONENTS.map(CycloElem::zeta_power));
    Generators { s, t }
}

/// S², T¹³ and (ST)³ against −I, I and I.
pub fn verify_relations(g: &Generators) -> Vec<CheckResult> {
    let id = GMatrix::identity();
    let minus = id.neg();
    let s2 = g.s.pow(2);
    let t13 = g.t.pow(13);
    let st3 = g.s.mul(&g.t).pow(3);
    let describe = describe_scalar;
    vec![
        CheckResult::new("S^2 = -I", s2 == minus, format!("S^2 = {}", describe(&s2)))
            .cite("generator relations"),
        CheckResult::new("T^13 = I", t13 == id, format!("T^13 = {}", describe(&t13)))
            .cite("generator relations"),
        CheckResult::new("(ST)^3 = I", st3 == id, format!("(ST)^3 = {}", describe(&st3)))
            .cite("generator relations"),
    ]
}

/// "I", "-I", or the (1,1) entry for other matrices.
pub fn describe_scalar(m: &GMatrix) -> String {
    let id = GMatrix::identity();
    if *m == id {
        "I".to_string()
    } else if *m == id.neg() {
        "-I".to_string()
    } else {
        format!("a non-scalar matrix with entry(1,1) = {}", m.get(0, 0))
    }
}

/// The element table of a finite matrix group.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub elements: Vec<GMatrix>,
    index: HashMap<GMatrix, usize>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &GMatrix) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &GMatrix) -> bool {
        self.index.contains_key(g)
    }

    /// "GTBL v1" dump: header, then one line per element with its index and
    /// 36 canonical entries, tab-separated.
    pub fn dump(&self) -> String {
        let mut out = format!("GTBL v1 {}\n", self.order());
        for (i, g) in self.elements.iter().enumerate() {
            let _ = writeln!(out, "{i}\t{}", g.to_canonical());
        }
        out
    }
}

/// Default closure cap.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// Breadth-first closure of the identity under right multiplication by the
/// generators.
pub fn generate_group(gens: &[GMatrix], cap: usize) -> Result<GroupTable, GroupError> {
    let id = GMatrix::identity();
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0);
    let mut head = 0;
    while head < elements.len() {
        let g = elements[head].clone();
        head += 1;
        for s in gens {
            let h = g.mul(s);
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
    }
    Ok(GroupTable { elements, index })
}

/// The letters of the word defining H, as (letter, exponent) with letter
/// `'P'` or `'Q'`.
pub const H_WORD: [(char, u32); 9] =
    [('Q', 5), ('P', 2), ('P', 2), ('Q', 6), ('P', 8), ('Q', 5), ('P', 2), ('P', 3), ('Q', 1)];

#[derive(Clone, Debug)]
pub struct WordElements {
    pub p: GMatrix,
    pub q: GMatrix,
    pub h: GMatrix,
}

/// Evaluates a word in two letters given their values.
pub fn evaluate_word<M: Clone>(
    word: &[(char, u32)],
    p: &M,
    q: &M,
    one: M,
    mul: impl Fn(&M, &M) -> M,
) -> M {
    let mut acc = one;
    for &(letter, k) in word {
        let base = if letter == 'P' { p } else { q };
        for _ in 0..k {
            acc = mul(&acc, base);
        }
    }
    acc
}

/// P = S T⁻¹ S, Q = S T³ and the word H. T⁻¹ is taken as T¹².
pub fn build_word_elements(g: &Generators) -> WordElements {
    let p = g.s.mul(&g.t.pow(12)).mul(&g.s);
    let q = g.s.mul(&g.t.pow(3));
    let h = evaluate_word(&H_WORD, &p, &q, GMatrix::identity(), GMatrix::mul);
    WordElements { p, q, h }
}

/// Checks on H and on the relation (Q³P⁴)³ = −I.
pub fn verify_word_elements(g: &Generators, w: &WordElements) -> Vec<CheckResult> {
    let id = GMatrix::identity();
    let displayed = GMatrix::from_int_rows(H_DISPLAYED);
    let h_witness = if w.h == displayed {
        "H equals the displayed matrix".to_string()
    } else if w.h == displayed.neg() {
        "H equals -1 times the displayed matrix".to_string()
    } else {
        format!("H entry(1,6) = {}", w.h.get(0, 5))
    };
    let h5 = w.h.pow(5);
    let h6 = h5.mul(&w.h);
    let h_inv = h6.mul(&h5);
    let inverse_ok = h_inv.mul(&w.h) == id;
    let conj = h_inv.mul(&g.t).mul(&w.h);
    let t4 = g.t.pow(4);
    let conj_witness = if !inverse_ok {
        "H^11 is not the inverse of H".to_string()
    } else if conj == t4.neg() {
        "H^-1 T H = -T^4 (H^-1 = H^11)".to_string()
    } else if conj == t4 {
        "H^-1 T H = +T^4 (H^-1 = H^11)".to_string()
    } else {
        "H^-1 T H is not a multiple of T^4".to_string()
    };
    let minus_t4 = t4.neg();
    let qp = w.q.pow(3).mul(&w.p.pow(4)).pow(3);
    vec![
        CheckResult::new("word H equals displayed matrix", w.h == displayed, h_witness)
            .cite("word element H"),
        CheckResult::new("H^6 = I", h6 == id, format!("H^6 = {}", describe_scalar(&h6)))
            .cite("word element H"),
        CheckResult::new("H^-1 T H = -T^4", inverse_ok && conj == minus_t4, conj_witness)
            .cite("word element H"),
        CheckResult::new("(Q^3 P^4)^3 = -I", qp == id.neg(), format!("(Q^3 P^4)^3 = {}", describe_scalar(&qp)))
            .cite("word relation in P and Q"),
    ]
}

/// A 2×2 integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix2(pub [[BigInt; 2]; 2]);

impl IntMatrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2([[a.into(), b.into()], [c.into(), d.into()]])
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        let a = &self.0;
        let b = &o.0;
        IntMatrix2(std::array::from_fn(|i| {
            std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j])
        }))
    }

    pub fn det(&self) -> BigInt {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }
}

/// The displayed integer lift of H.
pub fn h_lift_displayed() -> IntMatrix2 {
    IntMatrix2::new(4_428_249, -10_547_030, -11_594_791, 27_616_019)
}

/// The H word evaluated on s = [[0,−1],[1,0]] and t = [[1,1],[0,1]] with
/// p = s t⁻¹ s and q = s t³.
pub fn lift_word_2x2() -> IntMatrix2 {
    let s = IntMatrix2::new(0, -1, 1, 0);
    let t_inv = IntMatrix2::new(1, -1, 0, 1);
    let t3 = IntMatrix2::new(1, 3, 0, 1);
    let p = s.mul(&t_inv).mul(&s);
    let q = s.mul(&t3);
    evaluate_word(&H_WORD, &p, &q, IntMatrix2::identity(), IntMatrix2::mul)
}

/// Checks the lift against the displayed matrix and the congruence of its
/// off-diagonal entries modulo 13.
pub fn verify_lift(h: &IntMatrix2) -> Vec<CheckResult> {
    let shown = h_lift_displayed();
    let thirteen = BigInt::from(13);
    let off_ok = (&h.0[0][1] % &thirteen).is_zero() && (&h.0[1][0] % &thirteen).is_zero();
    vec![
        CheckResult::new(
            "lift h equals displayed matrix",
            *h == shown,
            format!("h = [[{}, {}], [{}, {}]]", h.0[0][0], h.0[0][1], h.0[1][0], h.0[1][1]),
        )
        .cite("integer lift h"),
        CheckResult::new(
            "lift h off-diagonal = 0 mod 13",
            off_ok,
            format!("h12 mod 13 = {}, h21 mod 13 = {}", &h.0[0][1] % &thirteen, &h.0[1][0] % &thirteen),
        )
        .cite("integer lift h"),
        CheckResult::new("lift h has determinant 1", h.det().is_one(), format!("det = {}", h.det())),
    ]
}
