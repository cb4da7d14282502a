use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{ColoringSearch, LinkDiagram};
use crate::cocycles::CocyclePolynomial;
use crate::field::{Field, FieldElement};
use crate::homology::boundary_terms;
use crate::quandle::{AlexanderQuandle, FiniteQuandle, XSetAction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinkError {
    #[error("weights are not a cocycle: {0}")]
    NotACocycle(String),
    #[error("weights are defined on a quandle of order {table}, not {quandle}")]
    SizeMismatch { table: usize, quandle: usize },
    #[error("weights of arity {0} (2 for pair weights, 3 for shadow weights)")]
    BadArity(usize),
    #[error("quandle is not connected")]
    NotConnected,
    #[error("arc {arc} or color {color} out of range")]
    BadBase { arc: usize, color: usize },
}

/// A function X^k -> F_q (k = 2 or 3) tabulated, x1 most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleTable {
    field: Arc<Field>,
    arity: usize,
    n: usize,
    values: Vec<FieldElement>,
}

impl CocycleTable {
    pub fn from_fn(field: &Arc<Field>, n: usize, arity: usize, f: impl Fn(&[usize]) -> FieldElement) -> Self {
        let total = n.pow(arity as u32);
        let mut xs = vec![0usize; arity];
        let values = (0..total)
            .map(|mut code| {
                for k in (0..arity).rev() {
                    xs[k] = code % n;
                    code /= n;
                }
                f(&xs)
            })
            .collect();
        CocycleTable { field: field.clone(), arity, n, values }
    }

    pub fn zero(field: &Arc<Field>, n: usize, arity: usize) -> Self {
        Self::from_fn(field, n, arity, |_| field.zero())
    }

    /// A 3-cocycle polynomial as shadow weights on its own quandle.
    pub fn from_polynomial(poly: &CocyclePolynomial, x: &AlexanderQuandle) -> Self {
        let f = poly.field();
        Self::from_fn(f, x.order(), 3, |t| poly.evaluate_triple([f.element(t[0]), f.element(t[1]), f.element(t[2])]))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, xs: &[usize]) -> FieldElement {
        self.values[xs.iter().fold(0, |acc, &x| acc * self.n + x)]
    }

    /// Vanishing on degenerate tuples and on boundaries of nondegenerate tuples.
    pub fn check(&self, q: &FiniteQuandle) -> Result<(), LinkError> {
        if q.order() != self.n {
            return Err(LinkError::SizeMismatch { table: self.n, quandle: q.order() });
        }
        let (n, k) = (self.n, self.arity);
        let f = &self.field;
        let point = XSetAction::point(q);
        let mut xs = vec![0usize; k + 1];
        for code in 0..n.pow(k as u32 + 1) {
            let mut c = code;
            for i in (0..=k).rev() {
                xs[i] = c % n;
                c /= n;
            }
            if code < n.pow(k as u32) {
                // reuse the loop for the degenerate k-tuples
                let t = &xs[1..];
                if t.windows(2).any(|w| w[0] == w[1]) && self.get(t) != f.zero() {
                    return Err(LinkError::NotACocycle(format!("nonzero on degenerate {t:?}")));
                }
            }
            if xs.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let mut sum = f.zero();
            for (sign, _, face) in boundary_terms(q, &point, 0, &xs) {
                let v = self.get(&face);
                sum = if sign > 0 { f.add(sum, v) } else { f.sub(sum, v) };
            }
            if sum != f.zero() {
                return Err(LinkError::NotACocycle(format!("nonzero on the boundary of {xs:?}")));
            }
        }
        Ok(())
    }
}

/// An element of the group ring Z[A] with A the additive group of a field.
#[derive(Clone, PartialEq, Eq)]
pub struct StateSum {
    field: Arc<Field>,
    counts: BTreeMap<FieldElement, u64>,
}

impl StateSum {
    fn new(field: &Arc<Field>) -> Self {
        StateSum { field: field.clone(), counts: BTreeMap::new() }
    }

    fn push(&mut self, g: FieldElement, k: u64) {
        *self.counts.entry(g).or_default() += k;
    }

    pub fn counts(&self) -> &BTreeMap<FieldElement, u64> {
        &self.counts
    }

    /// Total coefficient, the number of colorings summed over.
    pub fn mass(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Whether all mass sits on the identity.
    pub fn is_trivial(&self) -> bool {
        self.counts.keys().all(|&g| g == self.field.zero())
    }

    /// The involution g -> -g.
    pub fn inverse(&self) -> Self {
        let mut out = Self::new(&self.field);
        for (&g, &k) in &self.counts {
            out.push(self.field.neg(g), k);
        }
        out
    }

    pub fn scale(&self, k: u64) -> Self {
        let mut out = self.clone();
        for v in out.counts.values_mut() {
            *v *= k;
        }
        out
    }

    /// (element text, coefficient) in element order.
    pub fn terms(&self) -> Vec<(String, u64)> {
        self.counts.iter().map(|(&g, &k)| (self.field.format(g), k)).collect()
    }
}

impl fmt::Display for StateSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().into_iter().map(|(g, k)| format!("{k}*[{g}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for StateSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn signed(field: &Field, acc: FieldElement, positive: bool, v: FieldElement) -> FieldElement {
    if positive {
        field.add(acc, v)
    } else {
        field.sub(acc, v)
    }
}

fn pair_weight(d: &LinkDiagram, phi: &CocycleTable, arcs: &[usize]) -> FieldElement {
    let f = &phi.field;
    d.crossings().iter().fold(f.zero(), |acc, c| {
        let (s, _) = c.under_source_target();
        let v = phi.get(&[arcs[d.arc_of_edge(s)], arcs[d.arc_of_edge(c.over_edge())]]);
        signed(f, acc, c.positive, v)
    })
}

fn shadow_weight(d: &LinkDiagram, theta: &CocycleTable, arcs: &[usize], faces: &[usize]) -> FieldElement {
    let f = &theta.field;
    d.crossings().iter().fold(f.zero(), |acc, c| {
        let (s, _) = c.under_source_target();
        let r = faces[d.source_face(c)];
        let v = theta.get(&[r, arcs[d.arc_of_edge(s)], arcs[d.arc_of_edge(c.over_edge())]]);
        signed(f, acc, c.positive, v)
    })
}

fn sum_over(
    q: &FiniteQuandle,
    d: &LinkDiagram,
    table: &CocycleTable,
    fixed: Option<(usize, usize)>,
) -> Result<StateSum, LinkError> {
    table.check(q)?;
    if let Some((arc, color)) = fixed {
        if arc >= d.arc_count() || color >= q.order() {
            return Err(LinkError::BadBase { arc, color });
        }
    }
    let search = ColoringSearch::new(q, d);
    let mut out = StateSum::new(&table.field);
    match table.arity {
        2 => search.for_each(fixed, |arcs| out.push(pair_weight(d, table, arcs), 1)),
        3 => search.for_each(fixed, |arcs| {
            for r in 0..q.order() {
                let faces = search.extend_to_faces(arcs, 0, r).expect("face colors of a planar diagram are consistent");
                out.push(shadow_weight(d, table, arcs, &faces), 1);
            }
        }),
        k => return Err(LinkError::BadArity(k)),
    }
    Ok(out)
}

/// Sum over colorings of the signed pair weights phi(source, over).
pub fn two_cocycle_invariant(q: &FiniteQuandle, d: &LinkDiagram, phi: &CocycleTable) -> Result<StateSum, LinkError> {
    if phi.arity != 2 {
        return Err(LinkError::BadArity(phi.arity));
    }
    sum_over(q, d, phi, None)
}

/// Sum over shadow colorings of the signed weights theta(region, source, over).
pub fn shadow_invariant(q: &FiniteQuandle, d: &LinkDiagram, theta: &CocycleTable) -> Result<StateSum, LinkError> {
    if theta.arity != 3 {
        return Err(LinkError::BadArity(theta.arity));
    }
    sum_over(q, d, theta, None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedReport {
    pub full: StateSum,
    pub based: StateSum,
}

impl BasedReport {
    pub fn holds(&self, order: usize) -> bool {
        self.full == self.based.scale(order as u64)
    }
}

/// For connected X: the sum over all colorings against |X| times the sum over
/// colorings with `arc` colored `color` (weights of arity 2 or 3).
pub fn based_reduction(
    q: &FiniteQuandle,
    d: &LinkDiagram,
    table: &CocycleTable,
    arc: usize,
    color: usize,
) -> Result<BasedReport, LinkError> {
    if !q.is_connected() {
        return Err(LinkError::NotConnected);
    }
    Ok(BasedReport { full: sum_over(q, d, table, None)?, based: sum_over(q, d, table, Some((arc, color)))? })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorReport {
    pub original: StateSum,
    /// The invariant of the reversed mirror image.
    pub reversed_mirror: StateSum,
}

impl MirrorReport {
    pub fn holds(&self) -> bool {
        self.reversed_mirror == self.original.inverse()
    }
}

/// The invariant of the reversed mirror image against the inverted invariant.
pub fn mirror_check(q: &FiniteQuandle, d: &LinkDiagram, table: &CocycleTable) -> Result<MirrorReport, LinkError> {
    let other = d.mirror().reverse();
    Ok(MirrorReport { original: sum_over(q, d, table, None)?, reversed_mirror: sum_over(q, &other, table, None)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::dihedral_cocycle;
    use crate::link::tests::TREFOIL;

    fn trefoil() -> LinkDiagram {
        LinkDiagram::parse_pd(TREFOIL).unwrap()
    }

    #[test]
    fn zero_weights_give_mass_points() {
        let (x, _) = dihedral_cocycle(3).unwrap();
        let f = x.field().unwrap().0.clone();
        let z2 = CocycleTable::zero(&f, 3, 2);
        let z3 = CocycleTable::zero(&f, 3, 3);
        let s = two_cocycle_invariant(x.quandle(), &trefoil(), &z2).unwrap();
        assert_eq!(s.to_string(), "9*[0]");
        assert_eq!(shadow_invariant(x.quandle(), &trefoil(), &z3).unwrap().to_string(), "27*[0]");
        let u = LinkDiagram::unknot();
        let (_, theta) = dihedral_cocycle(3).unwrap();
        let t = CocycleTable::from_polynomial(&theta, &x);
        assert_eq!(shadow_invariant(x.quandle(), &u, &t).unwrap().to_string(), "9*[0]");
    }

    #[test]
    fn dihedral_shadow_invariant_of_trefoil_is_nontrivial() {
        let (x, theta) = dihedral_cocycle(3).unwrap();
        let t = CocycleTable::from_polynomial(&theta, &x);
        let s = shadow_invariant(x.quandle(), &trefoil(), &t).unwrap();
        assert_eq!(s.mass(), 27);
        assert!(!s.is_trivial(), "{s}");
    }

    #[test]
    fn non_cocycles_are_rejected() {
        let (x, _) = dihedral_cocycle(3).unwrap();
        let f = x.field().unwrap().0.clone();
        let bad = CocycleTable::from_fn(&f, 3, 3, |t| f.element(t[0]));
        assert!(matches!(shadow_invariant(x.quandle(), &trefoil(), &bad), Err(LinkError::NotACocycle(_))));
    }
}
