//! Alexander quandles x * y = Tx + (1-T)y on finite Z[T]-modules.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::inner::then;
use super::{FiniteQuandle, Provenance, QuandleError};
use crate::field::{Field, FieldElement, FqSpec};
use crate::textpoly;

const MAX_MODULE_ORDER: u64 = 1 << 15;
const MAX_T_ORDER: u64 = 1 << 24;

/// A description of an Alexander quandle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlexanderSpec {
    /// Z_m with T = -1.
    Dihedral { m: u64 },
    /// Z_m[T]/(h(T)) for a polynomial with unit leading coefficient.
    Module { m: u64, poly: Vec<i64> },
    /// F_q with T acting as multiplication by omega (little-endian coefficients in t).
    Field { field: FqSpec, omega: Vec<i64> },
    /// The product of `copies` copies of `base`.
    Power { base: Box<AlexanderSpec>, copies: u32 },
}

impl AlexanderSpec {
    pub fn dihedral(m: u64) -> Self {
        AlexanderSpec::Dihedral { m }
    }

    pub fn module(m: u64, poly: &[i64]) -> Self {
        AlexanderSpec::Module { m, poly: poly.to_vec() }
    }

    pub fn field(field: FqSpec, omega: &str) -> Result<Self, QuandleError> {
        let f = Field::new(field.clone());
        let w = f.parse_element(omega)?;
        let omega = f.coeffs(w).into_iter().map(i64::from).collect();
        Ok(AlexanderSpec::Field { field, omega })
    }

    pub fn power(base: AlexanderSpec, copies: u32) -> Self {
        AlexanderSpec::Power { base: Box::new(base), copies }
    }

    /// Parses `dihedral:<m>`, `alex:<m>:<poly in T>`, `gf:<p>^<h>[:<modulus>]:omega=<element>`
    /// or `pow:<spec>^<copies>`.
    pub fn parse(s: &str) -> Result<Self, QuandleError> {
        let bad = |why: &str| QuandleError::BadSpec(format!("{s:?}: {why}"));
        let s = s.trim();
        let (head, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        match head {
            "dihedral" => {
                let m = rest.trim().parse().map_err(|_| bad("modulus must be a positive integer"))?;
                Ok(AlexanderSpec::Dihedral { m })
            }
            "alex" => {
                let (m, poly) = rest.split_once(':').ok_or_else(|| bad("expected alex:<m>:<poly>"))?;
                let m = m.trim().parse().map_err(|_| bad("modulus must be a positive integer"))?;
                Ok(AlexanderSpec::Module { m, poly: textpoly::parse(poly, 'T')? })
            }
            "gf" => {
                let (field, omega) = rest.rsplit_once(":omega=").ok_or_else(|| bad("expected ...:omega=<element>"))?;
                AlexanderSpec::field(FqSpec::parse(field)?, omega)
            }
            "pow" => {
                let (base, copies) = rest.rsplit_once('^').ok_or_else(|| bad("expected pow:<spec>^<copies>"))?;
                let copies = copies.trim().parse().map_err(|_| bad("copies must be a positive integer"))?;
                Ok(AlexanderSpec::power(AlexanderSpec::parse(base)?, copies))
            }
            _ => Err(bad("unknown quandle family")),
        }
    }

    /// The underlying module: T as a matrix over Z_m.
    pub fn module_data(&self) -> Result<AlexanderModule, QuandleError> {
        let module = match self {
            AlexanderSpec::Dihedral { m } => AlexanderModule::companion(*m, &[1, 1])?,
            AlexanderSpec::Module { m, poly } => AlexanderModule::companion(*m, poly)?,
            AlexanderSpec::Field { field, omega } => {
                let f = Field::new(field.clone());
                let w = f.from_coeffs(omega);
                if w == f.zero() || w == f.one() {
                    return Err(QuandleError::OmegaTrivial);
                }
                let h = field.degree() as usize;
                let mut t = vec![0u64; h * h];
                for k in 0..h {
                    let mut basis = vec![0i64; k + 1];
                    basis[k] = 1;
                    let image = f.coeffs(f.mul(w, f.from_coeffs(&basis)));
                    for (row, &c) in image.iter().enumerate() {
                        t[row * h + k] = c as u64;
                    }
                }
                AlexanderModule::new(field.characteristic(), h, t)?
            }
            AlexanderSpec::Power { base, copies } => {
                if *copies == 0 {
                    return Err(QuandleError::BadSpec("power needs at least one copy".into()));
                }
                let b = base.module_data()?;
                let d = b.dim * *copies as usize;
                let mut t = vec![0u64; d * d];
                for c in 0..*copies as usize {
                    for i in 0..b.dim {
                        for j in 0..b.dim {
                            t[(c * b.dim + i) * d + c * b.dim + j] = b.entry(i, j);
                        }
                    }
                }
                AlexanderModule::new(b.modulus, d, t)?
            }
        };
        if !module.t_is_unit() {
            return Err(QuandleError::NonUnitT);
        }
        Ok(module)
    }

    fn provenance(&self) -> Provenance {
        match self {
            AlexanderSpec::Dihedral { .. } => Provenance::Dihedral,
            AlexanderSpec::Power { .. } => Provenance::Product,
            _ => Provenance::Alexander,
        }
    }
}

impl fmt::Display for AlexanderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlexanderSpec::Dihedral { m } => write!(f, "dihedral:{m}"),
            AlexanderSpec::Module { m, poly } => write!(f, "alex:{m}:{}", textpoly::format(poly, 'T')),
            AlexanderSpec::Field { field, omega } => {
                write!(f, "gf:{field}:omega={}", textpoly::format(omega, 't'))
            }
            AlexanderSpec::Power { base, copies } => write!(f, "pow:{base}^{copies}"),
        }
    }
}

/// The free Z_m-module Z_m^dim with T given as a matrix (acting on column vectors).
///
/// Module element `(c_0, ..., c_{dim-1})` has index `c_0 m^{dim-1} + ... + c_{dim-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderModule {
    modulus: u64,
    dim: usize,
    t: Vec<u64>,
}

impl AlexanderModule {
    fn new(modulus: u64, dim: usize, t: Vec<u64>) -> Result<Self, QuandleError> {
        if modulus == 0 {
            return Err(QuandleError::BadSpec("modulus must be positive".into()));
        }
        let order = (modulus as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if order > MAX_MODULE_ORDER as u128 {
            return Err(QuandleError::TooLarge(order.min(usize::MAX as u128) as usize));
        }
        let t = t.into_iter().map(|c| c % modulus).collect();
        Ok(AlexanderModule { modulus, dim, t })
    }

    /// Z_m[T]/(poly): T acts by the companion matrix in the basis 1, T, ..., T^{d-1}.
    fn companion(m: u64, poly: &[i64]) -> Result<Self, QuandleError> {
        let bad = |why: &str| QuandleError::BadSpec(why.to_string());
        if m == 0 {
            return Err(bad("modulus must be positive"));
        }
        let mm = m as i64;
        let mut p: Vec<i64> = poly.iter().map(|c| c.rem_euclid(mm)).collect();
        if m > 1 {
            while p.last() == Some(&0) {
                p.pop();
            }
        } else {
            // over Z_1 every polynomial is zero; use the rank-one module
            p = vec![0, 1];
        }
        if p.len() < 2 {
            return Err(bad("the polynomial in T must have degree at least 1 mod m"));
        }
        let d = p.len() - 1;
        let lead = p[d];
        let lead_inv = mod_inverse(lead as u64, m).ok_or_else(|| bad("leading coefficient must be a unit mod m"))?;
        for c in p.iter_mut() {
            *c = ((*c as u128 * lead_inv as u128) % m as u128) as i64;
        }
        let mut t = vec![0u64; d * d];
        for k in 0..d {
            if k + 1 < d {
                t[(k + 1) * d + k] = 1;
            } else {
                for (row, &c) in p[..d].iter().enumerate() {
                    t[row * d + k] = (m - c as u64 % m) % m;
                }
            }
        }
        AlexanderModule::new(m, d, t)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.modulus.pow(self.dim as u32) as usize
    }

    /// Entry (row, col) of the T matrix.
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.t[row * self.dim + col]
    }

    pub fn decode(&self, mut index: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.dim];
        for k in (0..self.dim).rev() {
            v[k] = (index as u64) % self.modulus;
            index /= self.modulus as usize;
        }
        v
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        v.iter().fold(0usize, |acc, &c| acc * self.modulus as usize + (c % self.modulus) as usize)
    }

    fn apply(&self, matrix: &[u64], v: &[u64]) -> Vec<u64> {
        let m = self.modulus as u128;
        (0..self.dim)
            .map(|i| ((0..self.dim).map(|j| matrix[i * self.dim + j] as u128 * v[j] as u128).sum::<u128>() % m) as u64)
            .collect()
    }

    fn mat_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (d, m) = (self.dim, self.modulus as u128);
        let mut out = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = ((0..d).map(|k| a[i * d + k] as u128 * b[k * d + j] as u128).sum::<u128>() % m) as u64;
            }
        }
        out
    }

    fn identity(&self) -> Vec<u64> {
        let d = self.dim;
        (0..d * d).map(|k| u64::from(k / d == k % d) % self.modulus).collect()
    }

    /// T applied to the element with the given index.
    pub fn t_times(&self, index: usize) -> usize {
        self.encode(&self.apply(&self.t, &self.decode(index)))
    }

    /// T^k applied to an element.
    pub fn t_power_times(&self, k: u64, index: usize) -> usize {
        let mut v = self.decode(index);
        for _ in 0..k {
            v = self.apply(&self.t, &v);
        }
        self.encode(&v)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        self.encode(&x.iter().zip(&y).map(|(p, q)| (p + q) % self.modulus).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        self.encode(&x.iter().zip(&y).map(|(p, q)| (p + self.modulus - q) % self.modulus).collect::<Vec<_>>())
    }

    /// x * y = Tx + (1-T)y = T(x - y) + y.
    pub fn operate(&self, x: usize, y: usize) -> usize {
        self.add(self.t_times(self.sub(x, y)), y)
    }

    fn det_mod(&self, matrix: &[u64]) -> u64 {
        let d = self.dim;
        let mut a: Vec<Vec<BigInt>> =
            (0..d).map(|i| (0..d).map(|j| BigInt::from(matrix[i * d + j])).collect()).collect();
        let det = bareiss_det(&mut a);
        let m = BigInt::from(self.modulus);
        let r = det.mod_floor(&m);
        u64::try_from(r).expect("reduced determinant fits")
    }

    fn unit_det(&self, matrix: &[u64]) -> bool {
        self.modulus == 1 || self.det_mod(matrix).gcd(&self.modulus) == 1
    }

    fn t_is_unit(&self) -> bool {
        self.unit_det(&self.t)
    }

    /// Whether 1 - T is invertible, decided by its determinant.
    pub fn one_minus_t_invertible(&self) -> bool {
        let id = self.identity();
        let m = self.modulus;
        let diff: Vec<u64> = id.iter().zip(&self.t).map(|(a, b)| (a + m - b) % m).collect();
        self.unit_det(&diff)
    }

    /// The least e >= 1 with T^e = 1.
    pub fn t_order(&self) -> u64 {
        let id = self.identity();
        let mut power = self.t.clone();
        let mut e = 1;
        while power != id {
            power = self.mat_mul(&power, &self.t);
            e += 1;
            assert!(e <= MAX_T_ORDER, "T order exceeds {MAX_T_ORDER}");
        }
        e
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let g = num_integer::Integer::extended_gcd(&(a as i128), &(m as i128));
    (g.gcd == 1).then(|| g.x.rem_euclid(m as i128) as u64)
}

fn bareiss_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    &sign * &a[n - 1][n - 1]
}

/// T-order, connectedness and regularity of an Alexander quandle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regularity {
    pub e: u64,
    pub connected: bool,
    pub regular: bool,
}

/// Result of comparing Inn(X) against the semidirect product Z/e x X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnStructureReport {
    pub inn_order: usize,
    pub expected_order: usize,
    pub witness: Option<String>,
}

impl InnStructureReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// An Alexander quandle together with its module data.
#[derive(Debug, Clone)]
pub struct AlexanderQuandle {
    spec: AlexanderSpec,
    module: AlexanderModule,
    quandle: FiniteQuandle,
    field: Option<(Arc<Field>, FieldElement)>,
}

impl AlexanderQuandle {
    pub fn new(spec: AlexanderSpec) -> Result<AlexanderQuandle, QuandleError> {
        let module = spec.module_data()?;
        let n = module.order();
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(module.operate(x, y) as u32);
            }
        }
        let quandle = FiniteQuandle::from_flat(n, table, spec.provenance())?;
        let field = match &spec {
            AlexanderSpec::Field { field, omega } => {
                let f = Field::new(field.clone());
                let w = f.from_coeffs(omega);
                Some((f, w))
            }
            _ => None,
        };
        Ok(AlexanderQuandle { spec, module, quandle, field })
    }

    pub fn parse(s: &str) -> Result<AlexanderQuandle, QuandleError> {
        AlexanderQuandle::new(AlexanderSpec::parse(s)?)
    }

    pub fn spec(&self) -> &AlexanderSpec {
        &self.spec
    }

    pub fn module(&self) -> &AlexanderModule {
        &self.module
    }

    pub fn quandle(&self) -> &FiniteQuandle {
        &self.quandle
    }

    pub fn order(&self) -> usize {
        self.quandle.order()
    }

    /// The field and omega, when built from a `gf:` description.
    pub fn field(&self) -> Option<(&Arc<Field>, FieldElement)> {
        self.field.as_ref().map(|(f, w)| (f, *w))
    }

    pub fn regularity(&self) -> Regularity {
        let e = self.module.t_order();
        let connected = self.module.one_minus_t_invertible();
        let regular = connected && e.gcd(&(self.order() as u64)) == 1;
        Regularity { e, connected, regular }
    }

    /// The automorphism y -> T^eps y + (1-T)x.
    pub fn affine_map(&self, eps: u64, x: usize) -> Vec<u32> {
        let shift = self.module.sub(x, self.module.t_times(x));
        (0..self.order()).map(|y| self.module.add(self.module.t_power_times(eps, y), shift) as u32).collect()
    }

    /// Checks |Inn(X)| = e|X| and that (eps, x) -> affine_map(eps, x) is a bijective
    /// homomorphism from Z/e x X, with (eps, x)(delta, z) = (eps + delta, T^delta x + z),
    /// onto the enumerated group.
    pub fn inn_structure_check(&self) -> Result<InnStructureReport, QuandleError> {
        let group = self.quandle.inner_group()?;
        let reg = self.regularity();
        let n = self.order();
        let expected_order = reg.e as usize * n;
        let mut report = InnStructureReport { inn_order: group.order(), expected_order, witness: None };
        if !reg.connected {
            report.witness = Some("quandle is not connected".into());
            return Ok(report);
        }
        if group.order() != expected_order {
            report.witness = Some(format!("|Inn| = {} but e|X| = {expected_order}", group.order()));
            return Ok(report);
        }
        let e = reg.e;
        let mut image = vec![usize::MAX; expected_order];
        for eps in 0..e {
            for x in 0..n {
                let phi = self.affine_map(eps, x);
                match group.index_of(&phi) {
                    Some(g) => image[eps as usize * n + x] = g,
                    None => {
                        report.witness = Some(format!("({eps}, {x}) maps outside Inn(X)"));
                        return Ok(report);
                    }
                }
            }
        }
        let mut sorted = image.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != expected_order {
            report.witness = Some("the map from Z/e x X is not injective".into());
            return Ok(report);
        }
        for eps in 0..e {
            for x in 0..n {
                for delta in 0..e {
                    for z in 0..n {
                        let lhs = then(
                            &group.elements()[image[eps as usize * n + x]],
                            &group.elements()[image[delta as usize * n + z]],
                        );
                        let w = self.module.add(self.module.t_power_times(delta, x), z);
                        let prod = ((eps + delta) % e) as usize * n + w;
                        if lhs != group.elements()[image[prod]] {
                            report.witness =
                                Some(format!("({eps}, {x}) * ({delta}, {z}) is not ({}, {w})", (eps + delta) % e));
                            return Ok(report);
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_three_table() {
        let d3 = AlexanderQuandle::parse("dihedral:3").unwrap();
        assert_eq!(d3.quandle().rows(), vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]);
        assert_eq!(d3.quandle().provenance(), Provenance::Dihedral);
    }

    #[test]
    fn field_and_module_forms_agree() {
        let a = AlexanderQuandle::parse("gf:3^2:t^2+1:omega=t").unwrap();
        let b = AlexanderQuandle::parse("alex:3:T^2+1").unwrap();
        assert_eq!(a.quandle().rows(), b.quandle().rows());
        let c = AlexanderQuandle::parse("gf:3^2:omega=t").unwrap();
        assert_eq!(a.quandle().rows(), c.quandle().rows());
    }

    #[test]
    fn power_matches_product() {
        let d3 = AlexanderQuandle::parse("dihedral:3").unwrap();
        let p = AlexanderQuandle::parse("pow:dihedral:3^2").unwrap();
        assert_eq!(p.quandle().rows(), d3.quandle().product(d3.quandle()).rows());
        let r = p.regularity();
        assert_eq!(r, Regularity { e: 2, connected: true, regular: true });
    }

    #[test]
    fn rejects_degenerate_specs() {
        assert_eq!(AlexanderQuandle::parse("gf:5:omega=1").unwrap_err(), QuandleError::OmegaTrivial);
        assert_eq!(AlexanderQuandle::parse("gf:5:omega=0").unwrap_err(), QuandleError::OmegaTrivial);
        assert_eq!(AlexanderQuandle::parse("alex:4:T+2").unwrap_err(), QuandleError::NonUnitT);
        assert!(AlexanderQuandle::parse("alex:4:2*T+1").is_err());
        assert!(AlexanderQuandle::parse("heap:3").is_err());
    }

    #[test]
    fn regularity_examples() {
        let z4 = AlexanderQuandle::parse("dihedral:4").unwrap();
        assert_eq!(z4.regularity(), Regularity { e: 2, connected: false, regular: false });
        assert_eq!(z4.quandle().connected_components(), vec![vec![0, 2], vec![1, 3]]);
        let f9 = AlexanderQuandle::parse("gf:3^2:omega=t").unwrap();
        assert_eq!(f9.regularity(), Regularity { e: 4, connected: true, regular: true });
        let t1 = AlexanderQuandle::parse("dihedral:1").unwrap();
        assert_eq!(t1.order(), 1);
        assert!(t1.regularity().regular);
    }

    #[test]
    fn spec_display_round_trips() {
        for s in ["dihedral:5", "alex:2:T^3+T+1", "gf:3^2:t^2+1:omega=t", "pow:dihedral:3^2", "alex:3:T^2-T-1"] {
            let spec = AlexanderSpec::parse(s).unwrap();
            assert_eq!(AlexanderSpec::parse(&spec.to_string()).unwrap(), spec);
        }
        assert_eq!(AlexanderSpec::parse("gf:3^2:omega=-1").unwrap().to_string(), "gf:3^2:t^2+1:omega=2");
    }

    #[test]
    fn inn_structure() {
        for (s, order) in [("dihedral:3", 6), ("pow:dihedral:3^2", 18), ("gf:3^2:omega=t", 36), ("dihedral:5", 10)] {
            let x = AlexanderQuandle::parse(s).unwrap();
            let r = x.inn_structure_check().unwrap();
            assert!(r.passed(), "{s}: {:?}", r.witness);
            assert_eq!(r.inn_order, order);
        }
    }
}
