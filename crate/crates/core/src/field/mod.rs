//! Exact arithmetic in F_q = F_p[t]/(f).
//!
//! Elements are stored as indices into the canonical enumeration of coefficient
//! vectors `(c_0, c_1, ..., c_{h-1})` in lexicographic order, constant term first:
//! `index = c_0 p^{h-1} + c_1 p^{h-2} + ... + c_{h-1}`. The same enumeration is used
//! for the elements of Alexander quandles built on the field.

mod fp_poly;

use std::fmt;
use std::sync::Arc;

use crate::textpoly;

/// Degrees up to this bound are tested for irreducibility by trial division.
pub const DEFAULT_BRUTE_FORCE_DEGREE: usize = 4;

const MAX_FIELD_ORDER: u64 = 1 << 22;
const ADD_TABLE_LIMIT: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    CompositeP(u64),
    #[error("modulus {0} is not irreducible")]
    ReducibleModulus(String),
    #[error("modulus {modulus} does not have degree {h} or is not monic")]
    BadModulus { modulus: String, h: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} exceeds the supported size")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error(transparent)]
    Parse(#[from] textpoly::PolyParseError),
    #[error("malformed field description {0:?}")]
    BadSpec(String),
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A validated description of F_p[t]/(modulus).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqSpec {
    p: u64,
    h: u32,
    modulus: Vec<u64>,
}

impl FqSpec {
    /// Without a modulus, picks the monic irreducible of degree `h` that is smallest
    /// under the integer encoding `sum c_k p^k` (i.e. compare the coefficient of
    /// `t^{h-1}` first, then `t^{h-2}`, ...). This gives `t^2+1` for F_9 and
    /// `t^3+t+1` for F_8.
    pub fn new(p: u64, h: u32, modulus: Option<&[i64]>) -> Result<Self, FieldError> {
        Self::with_brute_force_degree(p, h, modulus, DEFAULT_BRUTE_FORCE_DEGREE)
    }

    pub fn with_brute_force_degree(
        p: u64,
        h: u32,
        modulus: Option<&[i64]>,
        brute_force_degree: usize,
    ) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::CompositeP(p));
        }
        if h == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(h).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(FieldError::TooLarge(q.min(u64::MAX as u128) as u64));
        }
        let modulus = match modulus {
            None => fp_poly::smallest_irreducible(h as usize, p, brute_force_degree),
            Some(m) => {
                let f = fp_poly::from_signed(m, p);
                if f.len() != h as usize + 1 || f[h as usize] != 1 {
                    return Err(FieldError::BadModulus { modulus: textpoly::format(m, 't'), h });
                }
                if !fp_poly::is_irreducible(&f, p, brute_force_degree) {
                    return Err(FieldError::ReducibleModulus(textpoly::format(m, 't')));
                }
                f
            }
        };
        Ok(FqSpec { p, h, modulus })
    }

    /// Parses `p^h` or `p^h:<modulus in t>`, e.g. `3^2:t^2+1`. A bare prime means h=1.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let bad = || FieldError::BadSpec(s.to_string());
        let (size, modulus) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let (p, h) = match size.split_once('^') {
            Some((p, h)) => (p.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?),
            None => (size.trim().parse().map_err(|_| bad())?, 1),
        };
        let coeffs = modulus.map(|m| textpoly::parse(m, 't')).transpose()?;
        FqSpec::new(p, h, coeffs.as_deref())
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.h
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.h)
    }

    /// Little-endian modulus coefficients (monic, length h+1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_text(&self) -> String {
        let signed: Vec<i64> = self.modulus.iter().map(|&c| c as i64).collect();
        textpoly::format(&signed, 't')
    }
}

impl fmt::Display for FqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}:{}", self.p, self.h, self.modulus_text())
    }
}

/// An element of a [`Field`], as its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Arithmetic tables for one field.
#[derive(Debug)]
pub struct Field {
    spec: FqSpec,
    q: u32,
    p: u32,
    h: u32,
    place: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FqSpec) -> Arc<Field> {
        let p = spec.p as u32;
        let h = spec.h;
        let q = spec.order() as u32;
        // place[k] = p^{h-1-k}, the weight of coefficient c_k in the index
        let place: Vec<u32> = (0..h).map(|k| p.pow(h - 1 - k)).collect();
        let mut field = Field { spec, q, p, h, place, exp: Vec::new(), log: Vec::new(), neg: Vec::new(), add: None };
        field.neg = (0..q).map(|x| field.add_digits(0, x, true)).collect();
        if q as u64 <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.add_digits(a, b, false);
                }
            }
            field.add = Some(table);
        }
        field.build_log_tables();
        Arc::new(field)
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Arc<Field>, FieldError> {
        Ok(Field::new(FqSpec::new(p, 1, None)?))
    }

    fn add_digits(&self, a: u32, b: u32, negate_b: bool) -> u32 {
        let p = self.p;
        let mut out = 0;
        for &w in &self.place {
            let x = a / w % p;
            let y = b / w % p;
            let d = if negate_b { (x + p - y) % p } else { (x + y) % p };
            out += d * w;
        }
        out
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let pa: Vec<u64> = self.coeffs(FieldElement(a)).into_iter().map(u64::from).collect();
        let pb: Vec<u64> = self.coeffs(FieldElement(b)).into_iter().map(u64::from).collect();
        let prod = fp_poly::rem(&fp_poly::mul(&pa, &pb, self.spec.p), &self.spec.modulus, self.spec.p);
        prod.iter().enumerate().map(|(k, &c)| c as u32 * self.place[k]).sum()
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        let one = self.place[0];
        if q == 2 {
            self.exp = vec![one];
            self.log = vec![0, 0];
            self.log[one as usize] = 0;
            return;
        }
        for g in 1..q {
            if g == one {
                continue;
            }
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut x = one;
            loop {
                exp.push(x);
                x = self.mul_poly(x, g);
                if x == one {
                    break;
                }
            }
            if exp.len() == q as usize - 1 {
                let mut log = vec![0u32; q as usize];
                for (k, &e) in exp.iter().enumerate() {
                    log[e as usize] = k as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    pub fn spec(&self) -> &FqSpec {
        &self.spec
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.h
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(self.place[0])
    }

    /// The class of the variable `t`.
    pub fn t(&self) -> FieldElement {
        self.from_coeffs(&[0, 1])
    }

    pub fn element(&self, index: usize) -> FieldElement {
        assert!(index < self.q as usize, "element index {index} out of range");
        FieldElement(index as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Little-endian coefficients of the representative of degree < h.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        self.place.iter().map(|&w| x.0 / w % self.p).collect()
    }

    /// Reduces an integer polynomial in `t` into the field.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElement {
        let p = self.spec.p;
        let reduced = fp_poly::rem(&fp_poly::from_signed(coeffs, p), &self.spec.modulus, p);
        FieldElement(reduced.iter().enumerate().map(|(k, &c)| c as u32 * self.place[k]).sum())
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_coeffs(&[n])
    }

    pub fn parse_element(&self, text: &str) -> Result<FieldElement, FieldError> {
        Ok(self.from_coeffs(&textpoly::parse(text, 't')?))
    }

    pub fn format(&self, x: FieldElement) -> String {
        let signed: Vec<i64> = self.coeffs(x).into_iter().map(i64::from).collect();
        textpoly::format(&signed, 't')
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.add_digits(a.0, b.0, false)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        let n = self.q - 1;
        FieldElement(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return a;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (k % n)) % n) as usize])
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        self.pow(a, (self.p as u64).pow(k % self.h))
    }

    pub fn element_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroElement);
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Ok(n / num_integer::gcd(n, l))
    }

    /// The exponents 1, p, ..., p^{h-1}.
    pub fn p_power_exponents(&self) -> Vec<u64> {
        (0..self.h).map(|k| (self.p as u64).pow(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<Field> {
        Field::new(FqSpec::new(3, 2, None).unwrap())
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FqSpec::new(3, 1, None).unwrap().modulus_text(), "t");
        assert_eq!(FqSpec::new(3, 2, None).unwrap().modulus_text(), "t^2+1");
        assert_eq!(FqSpec::new(2, 3, None).unwrap().modulus_text(), "t^3+t+1");
        assert_eq!(FqSpec::new(3, 3, None).unwrap().modulus_text(), "t^3+2*t+1");
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(FqSpec::new(4, 1, None), Err(FieldError::CompositeP(4)));
        assert!(matches!(FqSpec::new(3, 2, Some(&[2, 0, 1])), Err(FieldError::ReducibleModulus(_))));
        assert!(matches!(FqSpec::new(3, 2, Some(&[1, 1])), Err(FieldError::BadModulus { .. })));
    }

    #[test]
    fn small_arithmetic() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.add(f3.from_int(2), f3.from_int(2)), f3.from_int(1));
        let f9 = f9();
        assert_eq!(f9.mul(f9.t(), f9.t()), f9.from_int(2));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
        assert_eq!(f5.inv(f5.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn element_orders() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.element_order(f7.from_int(-1)).unwrap(), 2);
        assert_eq!(f7.element_order(f7.from_int(2)).unwrap(), 3);
        let f9 = f9();
        assert_eq!(f9.element_order(f9.t()).unwrap(), 4);
        assert_eq!(f9.element_order(f9.parse_element("t+1").unwrap()).unwrap(), 8);
        assert_eq!(f9.element_order(f9.zero()), Err(FieldError::ZeroElement));
    }

    #[test]
    fn enumeration_is_constant_term_first() {
        let f9 = f9();
        assert_eq!(f9.t().index(), 1);
        assert_eq!(f9.one().index(), 3);
        assert_eq!(f9.coeffs(f9.element(5)), vec![1, 2]);
        assert_eq!(f9.format(f9.element(5)), "2*t+1");
        assert_eq!(f9.parse_element("2*t+1").unwrap().index(), 5);
    }

    #[test]
    fn p_powers() {
        assert_eq!(f9().p_power_exponents(), vec![1, 3]);
        assert_eq!(Field::new(FqSpec::new(3, 3, None).unwrap()).p_power_exponents(), vec![1, 3, 9]);
        assert_eq!(Field::prime(5).unwrap().p_power_exponents(), vec![1]);
    }

    #[test]
    fn frobenius_is_additive_up_to_81() {
        for (p, h) in [(2, 1), (2, 3), (2, 6), (3, 2), (3, 4), (5, 2), (7, 2)] {
            let f = Field::new(FqSpec::new(p, h, None).unwrap());
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.frobenius(f.add(a, b), 1);
                    assert_eq!(lhs, f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for (p, h) in [(2, 4), (3, 3), (5, 2), (11, 1)] {
            let f = Field::new(FqSpec::new(p, h, None).unwrap());
            let n = f.order() - 1;
            let orders: Vec<u64> = f.elements().skip(1).map(|x| f.element_order(x).unwrap()).collect();
            assert!(orders.iter().all(|o| n.is_multiple_of(*o)));
            assert!(orders.contains(&n));
        }
    }

    #[test]
    fn table_and_digit_addition_agree() {
        let f = Field::new(FqSpec::new(3, 5, None).unwrap());
        assert!(f.add.is_some() == (f.order() <= ADD_TABLE_LIMIT));
        let g = Field::new(FqSpec::new(3, 7, None).unwrap());
        assert!(g.add.is_none());
        for a in (0..g.q).step_by(97) {
            for b in (0..g.q).step_by(89) {
                let (x, y) = (FieldElement(a), FieldElement(b));
                assert_eq!(g.sub(g.add(x, y), y), x);
            }
        }
    }
}
