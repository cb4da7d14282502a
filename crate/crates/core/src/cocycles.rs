//! Explicit 2- and 3-cocycles of Alexander quandles on finite fields.
//!
//! A quandle on F_q with x * y = omega x + (1 - omega) y has third cohomology with
//! F_q coefficients spanned by polynomials in the difference coordinates
//! U0 = x1 - x2, U1 = x2 - x3, U2 = x3, built from monomials and the carry
//! polynomial chi(a, b) = ((a + b)^p - a^p - b^p) / p. This module enumerates that
//! spanning set, expands its members and checks them against the library's own
//! boundary.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::field::{Field, FieldElement};
use crate::homology::boundary_terms;
use crate::quandle::{AlexanderQuandle, XSetAction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CocycleError {
    #[error("quadruple family case {case} has no closed form here (defined in Mochizuki's original construction)")]
    GammaCaseUndefined { case: u8 },
    #[error("polynomial and quandle live over different fields")]
    FieldMismatch,
    #[error("omega must differ from 0 and 1")]
    OmegaTrivial,
    #[error("quandle was not built from a finite field")]
    NotAField,
}

/// Coefficient of a^(p-i) b^i in chi, for i = 1..p-1: (-1)^(i-1) / i mod p.
pub fn chi_coefficients(p: u64) -> Vec<u64> {
    (1..p)
        .map(|i| {
            let inv = mod_pow(i, p - 2, p);
            if i % 2 == 1 {
                inv
            } else {
                (p - inv) % p
            }
        })
        .collect()
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// A field together with the multiplier omega of the quandle.
#[derive(Debug, Clone)]
pub struct AlexanderField {
    field: Arc<Field>,
    omega: FieldElement,
}

impl AlexanderField {
    pub fn new(field: Arc<Field>, omega: FieldElement) -> Result<Self, CocycleError> {
        if omega == field.zero() || omega == field.one() {
            return Err(CocycleError::OmegaTrivial);
        }
        Ok(AlexanderField { field, omega })
    }

    pub fn of(x: &AlexanderQuandle) -> Result<Self, CocycleError> {
        let (f, w) = x.field().ok_or(CocycleError::NotAField)?;
        Self::new(f.clone(), w)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn omega(&self) -> FieldElement {
        self.omega
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn h(&self) -> u32 {
        self.field.degree()
    }

    /// 1, p, ..., q/p.
    pub fn p_powers(&self) -> Vec<u64> {
        self.field.p_power_exponents()
    }

    /// omega^k == 1
    pub fn root(&self, k: u64) -> bool {
        self.field.pow(self.omega, k) == self.field.one()
    }
}

/// A function F_q^3 -> F_q written as a polynomial in U0, U1, U2, with exponents
/// reduced by U^q = U.
#[derive(Clone, PartialEq, Eq)]
pub struct CocyclePolynomial {
    field: Arc<Field>,
    terms: BTreeMap<[u64; 3], FieldElement>,
}

impl fmt::Debug for CocyclePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CocyclePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut s = format!("({})", self.field.format(c));
                for (k, &ek) in e.iter().enumerate() {
                    match ek {
                        0 => {}
                        1 => s.push_str(&format!("*U{k}")),
                        _ => s.push_str(&format!("*U{k}^{ek}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl CocyclePolynomial {
    pub fn zero(field: &Arc<Field>) -> Self {
        CocyclePolynomial { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(field: &Arc<Field>, coefficient: FieldElement, exponents: [u64; 3]) -> Self {
        let mut p = Self::zero(field);
        p.add_term(exponents, coefficient);
        p
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Nonzero terms, exponents to coefficient.
    pub fn terms(&self) -> &BTreeMap<[u64; 3], FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn reduce_exponent(&self, e: u64) -> u64 {
        let q = self.field.order();
        if e == 0 {
            0
        } else {
            (e - 1) % (q - 1) + 1
        }
    }

    fn add_term(&mut self, e: [u64; 3], c: FieldElement) {
        let f = self.field.clone();
        let e = e.map(|x| self.reduce_exponent(x));
        let v = f.add(self.terms.get(&e).copied().unwrap_or(f.zero()), c);
        if v == f.zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, self.field.neg(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], self.field.mul(ca, cb));
            }
        }
        out
    }

    /// Raise to the power p^k (additive in characteristic p).
    pub fn frobenius(&self, k: u32) -> Self {
        let pk = self.field.characteristic().pow(k);
        let mut out = Self::zero(&self.field);
        for (e, &c) in &self.terms {
            out.add_term(e.map(|x| x * pk), self.field.pow(c, pk));
        }
        out
    }

    /// Raise to a power of p.
    pub fn p_power(&self, pk: u64) -> Self {
        let p = self.field.characteristic();
        let mut k = 0;
        let mut x = 1;
        while x < pk {
            x *= p;
            k += 1;
        }
        assert_eq!(x, pk, "{pk} is not a power of {p}");
        self.frobenius(k)
    }

    /// Value at (U0, U1, U2).
    pub fn evaluate(&self, u: [FieldElement; 3]) -> FieldElement {
        let f = &self.field;
        self.terms.iter().fold(f.zero(), |acc, (e, &c)| {
            let m = (0..3).fold(c, |m, k| f.mul(m, f.pow(u[k], e[k])));
            f.add(acc, m)
        })
    }

    /// Value on the chain (x1, x2, x3), through U0 = x1 - x2, U1 = x2 - x3, U2 = x3.
    pub fn evaluate_triple(&self, x: [FieldElement; 3]) -> FieldElement {
        let f = &self.field;
        self.evaluate([f.sub(x[0], x[1]), f.sub(x[1], x[2]), x[2]])
    }

    /// All values on X^3, indexed by x1 q^2 + x2 q + x3.
    pub fn value_table(&self) -> Vec<FieldElement> {
        let f = &self.field;
        let q = f.order() as usize;
        let mut out = Vec::with_capacity(q * q * q);
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    out.push(self.evaluate_triple([a, b, c]));
                }
            }
        }
        out
    }
}

/// chi(a U_i, b U_j).
pub fn chi(field: &Arc<Field>, a: FieldElement, slot_a: usize, b: FieldElement, slot_b: usize) -> CocyclePolynomial {
    let p = field.characteristic();
    let mut out = CocyclePolynomial::zero(field);
    for (k, &c) in chi_coefficients(p).iter().enumerate() {
        let i = k as u64 + 1;
        let coef = field.mul(field.from_int(c as i64), field.mul(field.pow(a, p - i), field.pow(b, i)));
        let mut e = [0u64; 3];
        e[slot_a] += p - i;
        e[slot_b] += i;
        out.add_term(e, coef);
    }
    out
}

/// Members of the spanning set. Arguments are the p-powers q1, q2, ... as in
/// F(q1, q2, q3), F(q1, q2, 0), E0(p q1, q2), E1(q1, p q2) and Gamma(q1, q2, q3, q4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    /// U0^q1 U1^q2 U2^q3
    Triple { q1: u64, q2: u64, q3: u64 },
    /// U0^q1 U1^q2, the image of a 2-cocycle
    Pair { q1: u64, q2: u64 },
    /// (chi(omega U0, U1) - chi(U0, U1))^q1 U2^q2
    CarryFirst { q1: u64, q2: u64 },
    /// U0^q1 (chi(U1, U2) - chi(U1, omega^-1 U2))^q2
    CarryLast { q1: u64, q2: u64 },
    /// quadruple family; only case 1 has a closed form, U0^q1 U1^(q2+q3) U2^q4
    Quadruple { q: [u64; 4], case: u8 },
}

impl Family {
    pub fn kind(&self) -> &'static str {
        match self {
            Family::Triple { .. } | Family::Pair { .. } => "F",
            Family::CarryFirst { .. } => "E0",
            Family::CarryLast { .. } => "E1",
            Family::Quadruple { .. } => "Gamma",
        }
    }

    /// The Gamma case, or None for the other families.
    pub fn case(&self) -> Option<u8> {
        match self {
            Family::Quadruple { case, .. } => Some(*case),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Triple { q1, q2, q3 } => write!(f, "F({q1},{q2},{q3})"),
            Family::Pair { q1, q2 } => write!(f, "F({q1},{q2},0)"),
            // E0 is written with its first argument already multiplied by p
            Family::CarryFirst { q1, q2 } => write!(f, "E0(p*{q1},{q2})"),
            Family::CarryLast { q1, q2 } => write!(f, "E1({q1},p*{q2})"),
            Family::Quadruple { q, case } => write!(f, "Gamma({},{},{},{})[case {case}]", q[0], q[1], q[2], q[3]),
        }
    }
}

/// The expanded polynomial of a family member.
pub fn family_polynomial(s: &AlexanderField, family: Family) -> Result<CocyclePolynomial, CocycleError> {
    let f = &s.field;
    let one = f.one();
    let mono = |e: [u64; 3]| CocyclePolynomial::monomial(f, one, e);
    Ok(match family {
        Family::Triple { q1, q2, q3 } => mono([q1, q2, q3]),
        Family::Pair { q1, q2 } => mono([q1, q2, 0]),
        Family::CarryFirst { q1, q2 } => {
            let d = chi(f, s.omega, 0, one, 1).sub(&chi(f, one, 0, one, 1));
            d.p_power(q1).mul(&mono([0, 0, q2]))
        }
        Family::CarryLast { q1, q2 } => {
            let inv = f.inv(s.omega).expect("omega is nonzero");
            let d = chi(f, one, 1, one, 2).sub(&chi(f, one, 1, inv, 2));
            mono([q1, 0, 0]).mul(&d.p_power(q2))
        }
        Family::Quadruple { q, case: 1 } => mono([q[0], q[1] + q[2], q[3]]),
        Family::Quadruple { case, .. } => return Err(CocycleError::GammaCaseUndefined { case }),
    })
}

/// The quadruples (q1, q2, q3, q4) of p-powers below q with q2 <= q3, q1 < q3,
/// q2 < q4 and omega^(q1+q3) = omega^(q2+q4) = 1 (q2 != q3 when p = 2) that fall
/// in one of the five cases, each tagged with its case.
pub fn enumerate_quadruples(s: &AlexanderField) -> Vec<Family> {
    let pw = s.p_powers();
    let p = s.p();
    let mut out = Vec::new();
    for &q1 in &pw {
        for &q2 in &pw {
            for &q3 in &pw {
                for &q4 in &pw {
                    if !(q2 <= q3 && q1 < q3 && q2 < q4) || (p == 2 && q2 == q3) {
                        continue;
                    }
                    if !(s.root(q1 + q3) && s.root(q2 + q4)) {
                        continue;
                    }
                    let same = s.field.pow(s.omega, q1) == s.field.pow(s.omega, q2);
                    let case = if s.root(q1 + q2) {
                        1
                    } else if q3 > q4 {
                        2
                    } else if p != 2 && q3 == q4 {
                        3
                    } else if p != 2 && q2 <= q1 && q1 < q3 && q3 < q4 && same {
                        4
                    } else if p == 2 && q2 < q1 && q1 < q3 && q3 < q4 && same {
                        5
                    } else {
                        continue;
                    };
                    out.push(Family::Quadruple { q: [q1, q2, q3, q4], case });
                }
            }
        }
    }
    out
}

/// dim over F_q of H^2_Q(X; F_q), counted as pairs i < j with omega^(p^i+p^j) = 1.
pub fn dim_h2_pairs(s: &AlexanderField) -> usize {
    let pw = s.p_powers();
    let mut n = 0;
    for (i, &a) in pw.iter().enumerate() {
        for &b in &pw[i + 1..] {
            n += usize::from(s.root(a + b));
        }
    }
    n
}

/// The same dimension as a sum of h - i over 0 < i < h with omega^(p^i+1) = 1.
pub fn dim_h2_sum(s: &AlexanderField) -> usize {
    let h = s.h() as usize;
    (1..h).filter(|&i| s.root(s.p().pow(i as u32) + 1)).map(|i| h - i).sum()
}

/// dim over F_q of H^2_Q(X; F_q); both counting forms are computed and must agree.
pub fn dim_h2(s: &AlexanderField) -> usize {
    let (a, b) = (dim_h2_pairs(s), dim_h2_sum(s));
    assert_eq!(a, b, "the two counts of H^2 disagree");
    a
}

#[derive(Debug, Clone)]
pub struct Member {
    pub family: Family,
    /// None for quadruple cases without a closed form.
    pub polynomial: Option<CocyclePolynomial>,
}

#[derive(Debug, Clone)]
pub struct CocycleBasisReport {
    pub members: Vec<Member>,
    /// dim H^2, from the pair count.
    pub b2: usize,
    /// |members| - b2.
    pub b3: usize,
}

impl CocycleBasisReport {
    pub fn explicit(&self) -> impl Iterator<Item = &CocyclePolynomial> {
        self.members.iter().filter_map(|m| m.polynomial.as_ref())
    }

    pub fn count_only(&self) -> usize {
        self.members.iter().filter(|m| m.polynomial.is_none()).count()
    }
}

/// The families spanning H^3_Q(X; F_q), in a fixed order.
pub fn enumerate_families(s: &AlexanderField) -> Vec<Family> {
    let pw = s.p_powers();
    let p = s.p();
    let mut out = Vec::new();
    for &q1 in &pw {
        for &q2 in &pw {
            for &q3 in &pw {
                if q1 < q2 && q2 < q3 && s.root(q1 + q2 + q3) {
                    out.push(Family::Triple { q1, q2, q3 });
                }
            }
        }
    }
    for &q1 in &pw {
        for &q2 in &pw {
            if q1 < q2 && s.root(q1 + q2) {
                out.push(Family::Pair { q1, q2 });
            }
        }
    }
    for &q1 in &pw {
        for &q2 in &pw {
            if q1 < q2 && s.root(p * q1 + q2) {
                out.push(Family::CarryFirst { q1, q2 });
            }
        }
    }
    for &q1 in &pw {
        for &q2 in &pw {
            if q1 <= q2 && s.root(q1 + p * q2) {
                out.push(Family::CarryLast { q1, q2 });
            }
        }
    }
    out.extend(enumerate_quadruples(s));
    out
}

pub fn build_basis(s: &AlexanderField) -> CocycleBasisReport {
    let members: Vec<Member> = enumerate_families(s)
        .into_iter()
        .map(|family| Member { family, polynomial: family_polynomial(s, family).ok() })
        .collect();
    let b2 = dim_h2(s);
    let b3 = members.len().saturating_sub(b2);
    CocycleBasisReport { members, b2, b3 }
}

fn check_quandle(f: &CocyclePolynomial, x: &AlexanderQuandle) -> Result<(), CocycleError> {
    let (xf, _) = x.field().ok_or(CocycleError::NotAField)?;
    if **xf != *f.field {
        return Err(CocycleError::FieldMismatch);
    }
    Ok(())
}

/// Outcome of a cocycle check, with a failing chain when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleCheck {
    pub witness: Option<String>,
}

impl CocycleCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that each polynomial vanishes on degenerate triples and on the boundary
/// of every nondegenerate 4-chain of X (one pass over X^4 for all of them).
pub fn check_cocycles(fs: &[CocyclePolynomial], x: &AlexanderQuandle) -> Result<Vec<CocycleCheck>, CocycleError> {
    for f in fs {
        check_quandle(f, x)?;
    }
    let (field, _) = x.field().ok_or(CocycleError::NotAField)?;
    let q = x.order();
    let tables: Vec<Vec<FieldElement>> = fs.iter().map(CocyclePolynomial::value_table).collect();
    let mut witness: Vec<Option<String>> = vec![None; fs.len()];
    let idx = |t: &[usize]| (t[0] * q + t[1]) * q + t[2];
    for a in 0..q {
        for b in 0..q {
            for (k, t) in tables.iter().enumerate() {
                if witness[k].is_none() {
                    if t[idx(&[a, a, b])] != field.zero() {
                        witness[k] = Some(format!("nonzero on degenerate ({a}, {a}, {b})"));
                    } else if t[idx(&[a, b, b])] != field.zero() {
                        witness[k] = Some(format!("nonzero on degenerate ({a}, {b}, {b})"));
                    }
                }
            }
        }
    }
    let point = XSetAction::point(x.quandle());
    let mut xs = [0usize; 4];
    for code in 0..q.pow(4) {
        let mut c = code;
        for k in (0..4).rev() {
            xs[k] = c % q;
            c /= q;
        }
        if xs.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let terms = boundary_terms(x.quandle(), &point, 0, &xs);
        for (k, t) in tables.iter().enumerate() {
            if witness[k].is_some() {
                continue;
            }
            let mut sum = field.zero();
            for (sign, _, face) in &terms {
                let v = t[idx(face)];
                sum = if *sign > 0 { field.add(sum, v) } else { field.sub(sum, v) };
            }
            if sum != field.zero() {
                witness[k] = Some(format!("value {} on the boundary of {xs:?}", field.format(sum)));
            }
        }
    }
    Ok(witness.into_iter().map(|witness| CocycleCheck { witness }).collect())
}

pub fn is_cocycle(f: &CocyclePolynomial, x: &AlexanderQuandle) -> Result<CocycleCheck, CocycleError> {
    Ok(check_cocycles(std::slice::from_ref(f), x)?.remove(0))
}

/// Row echelon form over F_q, rows added one at a time.
struct Echelon<'a> {
    field: &'a Field,
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl<'a> Echelon<'a> {
    fn new(field: &'a Field) -> Self {
        Echelon { field, rows: Vec::new() }
    }

    /// Reduces v and keeps it if it is independent; returns whether it was kept.
    fn insert(&mut self, mut v: Vec<FieldElement>) -> bool {
        let f = self.field;
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != f.zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != f.zero() {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
        }
        let Some(pivot) = v.iter().position(|&c| c != f.zero()) else {
            return false;
        };
        let inv = f.inv(v[pivot]).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // keep earlier rows reduced at the new pivot so later reductions stay one pass
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != f.zero() {
                for (x, &r) in row.iter_mut().zip(&v) {
                    if r != f.zero() {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Values of a cochain on the nondegenerate triples, in a fixed order.
fn on_nondegenerate(x: &AlexanderQuandle, values: impl Fn(&[usize]) -> FieldElement) -> Vec<FieldElement> {
    let q = x.order();
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                if a != b && b != c {
                    out.push(values(&[a, b, c]));
                }
            }
        }
    }
    out
}

/// Coboundaries of the indicator cochains of nondegenerate pairs.
fn coboundary_generators(x: &AlexanderQuandle) -> Vec<Vec<FieldElement>> {
    let (field, _) = x.field().expect("checked by callers");
    let q = x.order();
    let point = XSetAction::point(x.quandle());
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            if a == b {
                continue;
            }
            out.push(on_nondegenerate(x, |t| {
                let mut s = field.zero();
                for (sign, _, face) in boundary_terms(x.quandle(), &point, 0, t) {
                    if face[..] == [a, b] {
                        let one = field.one();
                        s = if sign > 0 { field.add(s, one) } else { field.sub(s, one) };
                    }
                }
                s
            }));
        }
    }
    out
}

/// Dimension over F_q of the span of the given cocycles modulo coboundaries.
/// Dense elimination in dimension q(q-1)^2: fine up to q = 9 or so.
pub fn rank_modulo_coboundaries(fs: &[CocyclePolynomial], x: &AlexanderQuandle) -> Result<usize, CocycleError> {
    for f in fs {
        check_quandle(f, x)?;
    }
    let (field, _) = x.field().ok_or(CocycleError::NotAField)?;
    let mut ech = Echelon::new(field);
    for g in coboundary_generators(x) {
        ech.insert(g);
    }
    let q = x.order();
    let mut rank = 0;
    for f in fs {
        let t = f.value_table();
        if ech.insert(on_nondegenerate(x, |s| t[(s[0] * q + s[1]) * q + s[2]])) {
            rank += 1;
        }
    }
    Ok(rank)
}

/// Whether f = g o boundary for some 2-cochain g of the quandle complex.
pub fn is_coboundary(f: &CocyclePolynomial, x: &AlexanderQuandle) -> Result<bool, CocycleError> {
    Ok(rank_modulo_coboundaries(std::slice::from_ref(f), x)? == 0)
}

/// The classical 3-cocycle of the dihedral quandle of prime order p: the
/// carry-last member with q1 = q2 = 1 at omega = -1.
pub fn dihedral_cocycle(p: u64) -> Result<(AlexanderQuandle, CocyclePolynomial), CocycleError> {
    let x = AlexanderQuandle::parse(&format!("gf:{p}:omega=-1")).map_err(|_| CocycleError::NotAField)?;
    let s = AlexanderField::of(&x)?;
    let f = family_polynomial(&s, Family::CarryLast { q1: 1, q2: 1 })?;
    Ok((x, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn setting(spec: &str) -> (AlexanderQuandle, AlexanderField) {
        let x = AlexanderQuandle::parse(spec).unwrap();
        let s = AlexanderField::of(&x).unwrap();
        (x, s)
    }

    fn binomial(n: u64, k: u64) -> BigUint {
        (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn chi_matches_binomial_oracle() {
        for p in [2u64, 3, 5, 7, 11] {
            let coeffs = chi_coefficients(p);
            for i in 1..p {
                let oracle = (binomial(p, i) / p) % p;
                assert_eq!(BigUint::from(coeffs[i as usize - 1]), oracle, "p={p} i={i}");
            }
        }
        assert_eq!(chi_coefficients(3), vec![1, 1]);
    }

    #[test]
    fn quandle_indices_are_field_indices() {
        let (x, s) = setting("gf:3^2:omega=t");
        let f = s.field();
        for a in f.elements() {
            for b in f.elements() {
                let expected = f.add(f.mul(s.omega(), a), f.mul(f.sub(f.one(), s.omega()), b));
                assert_eq!(x.quandle().op(a.index(), b.index()), expected.index());
            }
        }
    }

    #[test]
    fn quadruple_examples() {
        let (_, s) = setting("gf:3^2:omega=-1");
        assert_eq!(enumerate_quadruples(&s), vec![Family::Quadruple { q: [1, 1, 3, 3], case: 1 }]);
        let (_, s) = setting("gf:5:omega=-1");
        assert!(enumerate_quadruples(&s).is_empty());
        let (_, s) = setting("gf:3^3:omega=-1");
        let qs = enumerate_quadruples(&s);
        assert_eq!(qs.len(), 9);
        assert!(qs.iter().all(|f| f.case() == Some(1)));
    }

    #[test]
    fn quadruple_polynomial() {
        let (_, s) = setting("gf:3^2:omega=-1");
        let g = family_polynomial(&s, Family::Quadruple { q: [1, 1, 3, 3], case: 1 }).unwrap();
        assert_eq!(g, CocyclePolynomial::monomial(s.field(), s.field().one(), [1, 4, 3]));
        assert_eq!(
            family_polynomial(&s, Family::Quadruple { q: [1, 1, 3, 3], case: 3 }),
            Err(CocycleError::GammaCaseUndefined { case: 3 })
        );
    }

    #[test]
    fn basis_examples() {
        for p in [3, 5, 7] {
            let (_, s) = setting(&format!("gf:{p}:omega=-1"));
            let r = build_basis(&s);
            assert_eq!(
                r.members.iter().map(|m| m.family).collect::<Vec<_>>(),
                vec![Family::CarryLast { q1: 1, q2: 1 }]
            );
            assert_eq!((r.b2, r.b3), (0, 1));
        }
        let (_, s) = setting("gf:5:omega=2");
        let r = build_basis(&s);
        assert!(r.members.is_empty());
        // omega = t has order 4 = p + 1 over F_9; the quadruple member is case 3
        let (_, s) = setting("gf:3^2:omega=t");
        let r = build_basis(&s);
        let fams: Vec<Family> = r.members.iter().map(|m| m.family).collect();
        assert_eq!(
            fams,
            vec![
                Family::Pair { q1: 1, q2: 3 },
                Family::CarryLast { q1: 1, q2: 1 },
                Family::CarryLast { q1: 3, q2: 3 },
                Family::Quadruple { q: [1, 1, 3, 3], case: 3 },
            ]
        );
        assert_eq!((r.b2, r.b3, r.count_only()), (1, 3, 1));
    }

    #[test]
    fn h2_dimensions() {
        assert_eq!(dim_h2(&setting("gf:3^2:omega=t").1), 1);
        for h in 1..=4 {
            let (_, s) = setting(&format!("gf:3^{h}:omega=-1"));
            assert_eq!(dim_h2(&s), (h * (h - 1) / 2) as usize);
        }
        let (_, s) = setting("gf:3^3:omega=t");
        assert_eq!(dim_h2(&s), 0);
    }

    #[test]
    fn evaluation() {
        let (x, s) = setting("gf:3^3:omega=t");
        let f = s.field();
        let m = family_polynomial(&s, Family::Triple { q1: 1, q2: 3, q3: 9 }).unwrap();
        for (a, b, c) in [(1, 2, 3), (5, 17, 0), (26, 4, 9)] {
            let (a, b, c) = (f.element(a), f.element(b), f.element(c));
            let expected = f.mul(f.mul(f.sub(a, b), f.pow(f.sub(b, c), 3)), f.pow(c, 9));
            assert_eq!(m.evaluate_triple([a, b, c]), expected);
        }
        let (_, theta) = dihedral_cocycle(3).unwrap();
        // (x, x, y) has U0 = 0 and every term of theta carries U0
        assert!(theta.terms().keys().all(|e| e[0] > 0));
        let g3 = Field::prime(3).unwrap();
        assert_eq!(theta.evaluate_triple([g3.element(0), g3.element(1), g3.element(2)]), g3.element(2));
        let other = dihedral_cocycle(5).unwrap().1;
        assert_eq!(is_cocycle(&other, &x), Err(CocycleError::FieldMismatch));
    }

    #[test]
    fn dihedral_cocycles_are_nontrivial() {
        for p in [3, 5, 7] {
            let (x, theta) = dihedral_cocycle(p).unwrap();
            assert!(is_cocycle(&theta, &x).unwrap().passed(), "p={p}");
            assert!(!is_coboundary(&theta, &x).unwrap(), "p={p}");
        }
    }

    #[test]
    fn zero_and_bare_difference() {
        let (x, s) = setting("gf:5:omega=2");
        let zero = CocyclePolynomial::zero(s.field());
        assert!(is_cocycle(&zero, &x).unwrap().passed());
        assert!(is_coboundary(&zero, &x).unwrap());
        let u0 = CocyclePolynomial::monomial(s.field(), s.field().one(), [1, 0, 0]);
        let check = is_cocycle(&u0, &x).unwrap();
        assert!(!check.passed() && check.witness.is_some());
    }

    #[test]
    fn explicit_members_span_independently() {
        for spec in ["gf:3^2:omega=-1", "gf:3^2:omega=t", "gf:3:omega=-1", "gf:5:omega=-1"] {
            let (x, s) = setting(spec);
            let r = build_basis(&s);
            let explicit: Vec<CocyclePolynomial> = r.explicit().cloned().collect();
            assert!(check_cocycles(&explicit, &x).unwrap().iter().all(CocycleCheck::passed), "{spec}");
            assert_eq!(rank_modulo_coboundaries(&explicit, &x).unwrap(), explicit.len(), "{spec}");
        }
    }

    proptest! {
        #[test]
        fn coboundaries_are_detected(seed in prop::collection::vec(0usize..5, 20)) {
            // f = g o boundary for a random 2-cochain g on F_5, written out as a table
            let (x, s) = setting("gf:5:omega=3");
            let f = s.field();
            let g = |a: usize, b: usize| if a == b { f.zero() } else { f.element(seed[(a * 5 + b) % 20]) };
            let point = XSetAction::point(x.quandle());
            // interpolate the coboundary as a polynomial: sum over points of value * indicator
            let mut poly = CocyclePolynomial::zero(f);
            let one = f.one();
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        let t = [a.index(), b.index(), c.index()];
                        let mut v = f.zero();
                        for (sign, _, face) in boundary_terms(x.quandle(), &point, 0, &t) {
                            let w = g(face[0], face[1]);
                            v = if sign > 0 { f.add(v, w) } else { f.sub(v, w) };
                        }
                        if v == f.zero() {
                            continue;
                        }
                        // indicator of (U0, U1, U2) = u is prod (1 - (U_k - u_k)^(q-1))
                        let u = [f.sub(a, b), f.sub(b, c), c];
                        let mut ind = CocyclePolynomial::monomial(f, v, [0, 0, 0]);
                        for (k, &uk) in u.iter().enumerate() {
                            let mut lin = CocyclePolynomial::monomial(f, one, [0; 3]);
                            let mut e = [0u64; 3];
                            e[k] = 1;
                            let mut diff = CocyclePolynomial::monomial(f, one, e);
                            diff = diff.sub(&CocyclePolynomial::monomial(f, uk, [0; 3]));
                            let mut pw = CocyclePolynomial::monomial(f, one, [0; 3]);
                            for _ in 0..4 {
                                pw = pw.mul(&diff);
                            }
                            lin = lin.sub(&pw);
                            ind = ind.mul(&lin);
                        }
                        poly = poly.add(&ind);
                    }
                }
            }
            prop_assert!(is_cocycle(&poly, &x).unwrap().passed());
            prop_assert!(is_coboundary(&poly, &x).unwrap());
        }
    }
}
