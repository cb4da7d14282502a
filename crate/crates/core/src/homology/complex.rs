use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::ToPrimitive;

use super::{AbelianGroupClass, HomologyError, IntegerMatrix, SmithForm};
use crate::quandle::{CoefficientKind, FiniteQuandle, XSetAction};

/// Default cap on the number of generators in any single degree.
pub const DEFAULT_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Rack complex: all of Y x X^n.
    R,
    /// Degenerate subcomplex: x_i = x_{i+1} for some 1 <= i < n.
    D,
    /// Quandle quotient R/D, on the nondegenerate tuples.
    Q,
    /// Late-degenerate subcomplex: x_i = x_{i+1} for some 2 <= i < n.
    L,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "R" | "r" => Some(Variant::R),
            "D" | "d" => Some(Variant::D),
            "Q" | "q" => Some(Variant::Q),
            "L" | "l" => Some(Variant::L),
            _ => None,
        }
    }

    fn contains(self, xs: &[usize]) -> bool {
        let repeat_from = |start: usize| xs.windows(2).skip(start).any(|w| w[0] == w[1]);
        match self {
            Variant::R => true,
            Variant::D => repeat_from(0),
            Variant::Q => !repeat_from(0),
            Variant::L => repeat_from(1),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::R => "R",
            Variant::D => "D",
            Variant::Q => "Q",
            Variant::L => "L",
        };
        f.write_str(s)
    }
}

/// A truncated chain complex C_0 <- C_1 <- ... <- C_{n_max} with coefficients in the
/// free module on an X-set Y.
///
/// Generators of degree n are tuples (y; x_1, ..., x_n), encoded as
/// `y |X|^n + x_1 |X|^{n-1} + ... + x_n`; each degree's basis is sorted by code. The
/// boundary of a generator is
/// sum_i (-1)^i [(y.x_i; x_1*x_i, ..., x_{i-1}*x_i, x_{i+1}, ..., x_n) - (y; x_1, ..., ^x_i, ..., x_n)].
pub struct ChainComplex {
    variant: Variant,
    quandle: FiniteQuandle,
    action: XSetAction,
    budget: usize,
    x_order: usize,
    y_size: usize,
    bases: Vec<Vec<u64>>,
    boundaries: Vec<IntegerMatrix>,
    // Smith form of each boundary, with the generators one degree down that were
    // cancelled by unit pivots
    smith: Vec<OnceLock<(SmithForm, Vec<usize>)>>,
    // reduced boundary and the degree-n generators its columns stand for
    reduced: Vec<OnceLock<(IntegerMatrix, Vec<usize>)>>,
    ranks_mod: Mutex<HashMap<(usize, u64), usize>>,
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainComplex")
            .field("variant", &self.variant)
            .field("coefficients", &self.action.kind())
            .field("dims", &self.bases.iter().map(Vec::len).collect::<Vec<_>>())
            .finish()
    }
}

impl ChainComplex {
    pub fn build(
        x: &FiniteQuandle,
        y: &XSetAction,
        variant: Variant,
        n_max: usize,
    ) -> Result<ChainComplex, HomologyError> {
        Self::build_with_budget(x, y, variant, n_max, DEFAULT_BUDGET)
    }

    /// Trivial (point) coefficients.
    pub fn point(x: &FiniteQuandle, variant: Variant, n_max: usize) -> Result<ChainComplex, HomologyError> {
        Self::build(x, &XSetAction::point(x), variant, n_max)
    }

    pub fn build_with_budget(
        x: &FiniteQuandle,
        y: &XSetAction,
        variant: Variant,
        n_max: usize,
        budget: usize,
    ) -> Result<ChainComplex, HomologyError> {
        let (nx, ny) = (x.order(), y.size());
        for n in 0..=n_max {
            let full = (nx as u128).pow(n as u32) * ny as u128;
            if full > budget as u128 {
                return Err(HomologyError::BudgetExceeded {
                    degree: n,
                    size: full.min(u64::MAX as u128) as u64,
                    budget,
                });
            }
        }
        let bases: Vec<Vec<u64>> = (0..=n_max).map(|n| enumerate_basis(nx, ny, n, variant)).collect();
        let mut boundaries = vec![IntegerMatrix::zeros(0, bases[0].len())];
        for n in 1..=n_max {
            boundaries.push(build_boundary(x, y, variant, n, &bases[n - 1], &bases[n])?);
        }
        for n in 2..=n_max {
            if !boundaries[n - 1].mul(&boundaries[n]).is_zero() {
                return Err(HomologyError::BoundarySquareNonzero { degree: n });
            }
        }
        Ok(ChainComplex {
            variant,
            quandle: x.clone(),
            action: y.clone(),
            budget,
            x_order: nx,
            y_size: ny,
            bases,
            smith: (0..=n_max).map(|_| OnceLock::new()).collect(),
            reduced: (0..=n_max).map(|_| OnceLock::new()).collect(),
            boundaries,
            ranks_mod: Mutex::new(HashMap::new()),
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn coefficients(&self) -> CoefficientKind {
        self.action.kind()
    }

    pub fn n_max(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.bases[n].len()
    }

    /// The matrix of the boundary C_n -> C_{n-1} (rows indexed by degree n-1).
    pub fn boundary(&self, n: usize) -> &IntegerMatrix {
        &self.boundaries[n]
    }

    /// The generator (y; x_1, ..., x_n) at a basis position.
    pub fn generator(&self, n: usize, index: usize) -> (usize, Vec<usize>) {
        decode(self.bases[n][index], self.x_order, n)
    }

    pub fn index_of(&self, y: usize, xs: &[usize]) -> Option<usize> {
        let n = xs.len();
        if n > self.n_max() || y >= self.y_size {
            return None;
        }
        self.bases[n].binary_search(&encode(y, xs, self.x_order)).ok()
    }

    /// Columns of the boundary out of degree n that span the same lattice as all of
    /// them, or `None` when degree n + 1 is over budget.
    ///
    /// If a generator t has coefficient +-1 in the boundary of a cell of degree n + 1
    /// and every other face of that cell comes later in a fixed order, then, since the
    /// boundary squares to zero, the column of t is a combination of later columns.
    /// Dependencies only point forward, so the columns never dropped span the rest.
    /// The order compares tuples from the last coordinate backwards.
    fn spanning_columns(&self, n: usize) -> Option<Vec<usize>> {
        let nx = self.x_order;
        let total = (nx as u128).pow(n as u32 + 1) * self.y_size as u128;
        if total > self.budget as u128 {
            return None;
        }
        let basis = &self.bases[n];
        let priority: Vec<u64> = basis
            .iter()
            .map(|&c| {
                let (gy, mut xs) = decode(c, nx, n);
                xs.reverse();
                encode(gy, &xs, nx)
            })
            .collect();
        let mut dropped = vec![false; basis.len()];
        let mut faces: Vec<(u64, i64)> = Vec::new();
        for code in 0..total as u64 {
            let (gy, xs) = decode(code, nx, n + 1);
            if !self.variant.contains(&xs) {
                continue;
            }
            faces.clear();
            for (sign, ty, txs) in boundary_terms(&self.quandle, &self.action, gy, &xs) {
                faces.push((encode(ty, &txs, nx), sign));
            }
            faces.sort_unstable();
            let mut first: Option<(usize, i64)> = None;
            let mut k = 0;
            while k < faces.len() {
                let c = faces[k].0;
                let mut v = 0;
                while k < faces.len() && faces[k].0 == c {
                    v += faces[k].1;
                    k += 1;
                }
                // faces outside the basis are degenerate and vanish in the quotient
                if let (true, Ok(pos)) = (v != 0, basis.binary_search(&c)) {
                    if first.is_none_or(|(p, _)| priority[pos] < priority[p]) {
                        first = Some((pos, v));
                    }
                }
            }
            if let Some((pos, 1 | -1)) = first {
                dropped[pos] = true;
            }
        }
        Some((0..basis.len()).filter(|&i| !dropped[i]).collect())
    }

    /// The boundary out of degree n with redundant columns removed and with the rows
    /// of generators cancelled against degree n - 2 by unit pivots deleted. Cancelling
    /// such a pair is a chain homotopy equivalence that only deletes those rows here,
    /// so rank and invariant factors are those of the full boundary.
    fn reduced_boundary(&self, n: usize) -> &(IntegerMatrix, Vec<usize>) {
        self.reduced[n].get_or_init(|| {
            let full = &self.boundaries[n];
            let mut rows: Vec<bool> = vec![true; full.nrows()];
            if n >= 2 {
                for &r in &self.smith_data(n - 1).1 {
                    rows[r] = false;
                }
            }
            let rows: Vec<usize> = (0..full.nrows()).filter(|&r| rows[r]).collect();
            let cols = self.spanning_columns(n).unwrap_or_else(|| (0..full.ncols()).collect());
            (full.select(&rows, &cols), cols)
        })
    }

    fn smith_data(&self, n: usize) -> &(SmithForm, Vec<usize>) {
        self.smith[n].get_or_init(|| {
            let (matrix, cols) = self.reduced_boundary(n);
            let (form, pivots) = matrix.smith_form_with_pivots();
            // pivot columns of the reduced matrix, back in terms of the degree-n basis
            (form, pivots.into_iter().map(|c| cols[c]).collect())
        })
    }

    /// Smith form of the boundary out of degree n (cached).
    pub fn smith_form(&self, n: usize) -> &SmithForm {
        &self.smith_data(n).0
    }

    fn rank_mod(&self, n: usize, p: u64) -> usize {
        if let Some(&r) = self.ranks_mod.lock().unwrap().get(&(n, p)) {
            return r;
        }
        let r = self.reduced_boundary(n).0.rank_mod(p);
        self.ranks_mod.lock().unwrap().insert((n, p), r);
        r
    }

    fn check_degree(&self, n: usize) -> Result<(), HomologyError> {
        if n + 1 > self.n_max() {
            return Err(HomologyError::DegreeOutOfRange { degree: n, n_max: self.n_max() });
        }
        Ok(())
    }

    /// H_n over Z; requires n + 1 <= n_max.
    pub fn homology(&self, n: usize) -> Result<AbelianGroupClass, HomologyError> {
        self.check_degree(n)?;
        let out_rank = if n == 0 { 0 } else { self.smith_form(n).rank };
        let incoming = self.smith_form(n + 1);
        let free = self.dim(n) - out_rank - incoming.rank;
        let torsion = incoming
            .nontrivial
            .iter()
            .map(|d| d.to_u64().ok_or(HomologyError::FactorOverflow))
            .collect::<Result<Vec<u64>, _>>()?;
        Ok(AbelianGroupClass::new(free, &torsion))
    }

    /// dim H_n over F_p; requires n + 1 <= n_max.
    pub fn homology_mod(&self, n: usize, p: u64) -> Result<usize, HomologyError> {
        self.check_degree(n)?;
        if !crate::field::is_prime(p) {
            return Err(HomologyError::NotPrime(p));
        }
        let out_rank = if n == 0 { 0 } else { self.rank_mod(n, p) };
        Ok(self.dim(n) - out_rank - self.rank_mod(n + 1, p))
    }
}

pub(crate) fn encode(y: usize, xs: &[usize], nx: usize) -> u64 {
    xs.iter().fold(y as u64, |acc, &x| acc * nx as u64 + x as u64)
}

pub(crate) fn decode(mut code: u64, nx: usize, n: usize) -> (usize, Vec<usize>) {
    let mut xs = vec![0usize; n];
    for k in (0..n).rev() {
        xs[k] = (code % nx as u64) as usize;
        code /= nx as u64;
    }
    (code as usize, xs)
}

fn enumerate_basis(nx: usize, ny: usize, n: usize, variant: Variant) -> Vec<u64> {
    let total = (nx as u64).pow(n as u32) * ny as u64;
    (0..total).filter(|&code| variant.contains(&decode(code, nx, n).1)).collect()
}

/// The boundary terms of one generator, as (sign, y, tuple).
pub(crate) fn boundary_terms(
    x: &FiniteQuandle,
    y: &XSetAction,
    gy: usize,
    xs: &[usize],
) -> Vec<(i64, usize, Vec<usize>)> {
    let n = xs.len();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let sign = if i % 2 == 0 { -1 } else { 1 };
        let xi = xs[i];
        let mut moved: Vec<usize> = xs[..i].iter().map(|&a| x.op(a, xi)).collect();
        moved.extend_from_slice(&xs[i + 1..]);
        out.push((sign, y.act(gy, xi), moved));
        let mut dropped = xs[..i].to_vec();
        dropped.extend_from_slice(&xs[i + 1..]);
        out.push((-sign, gy, dropped));
    }
    out
}

fn build_boundary(
    x: &FiniteQuandle,
    y: &XSetAction,
    variant: Variant,
    n: usize,
    lower: &[u64],
    upper: &[u64],
) -> Result<IntegerMatrix, HomologyError> {
    let nx = x.order();
    let lower_total = (nx as u64).pow(n as u32 - 1) * y.size() as u64;
    let mut position = vec![u32::MAX; lower_total as usize];
    for (k, &code) in lower.iter().enumerate() {
        position[code as usize] = k as u32;
    }
    let mut triplets = Vec::with_capacity(upper.len() * 2 * n);
    let mut column: Vec<(u64, i64)> = Vec::with_capacity(2 * n);
    for (col, &code) in upper.iter().enumerate() {
        let (gy, xs) = decode(code, nx, n);
        column.clear();
        for (sign, ty, txs) in boundary_terms(x, y, gy, &xs) {
            column.push((encode(ty, &txs, nx), sign));
        }
        column.sort_unstable();
        let mut k = 0;
        while k < column.len() {
            let c = column[k].0;
            let mut v = 0;
            while k < column.len() && column[k].0 == c {
                v += column[k].1;
                k += 1;
            }
            if v == 0 {
                continue;
            }
            match position[c as usize] {
                u32::MAX => match variant {
                    // terms in degenerate classes vanish in the quotient
                    Variant::Q => {}
                    _ => {
                        let (ty, txs) = decode(c, nx, n - 1);
                        return Err(HomologyError::NotSubcomplex {
                            degree: n,
                            witness: format!("({gy}; {xs:?}) has boundary term ({ty}; {txs:?}) outside the basis"),
                        });
                    }
                },
                row => triplets.push((row as usize, col, v)),
            }
        }
    }
    Ok(IntegerMatrix::from_triplets(lower.len(), upper.len(), triplets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::AlexanderQuandle;

    fn d3() -> FiniteQuandle {
        AlexanderQuandle::parse("dihedral:3").unwrap().quandle().clone()
    }

    #[test]
    fn trivial_quandle_has_zero_boundaries() {
        let t = FiniteQuandle::trivial(3);
        for v in [Variant::R, Variant::D, Variant::Q, Variant::L] {
            let c = ChainComplex::point(&t, v, 4).unwrap();
            assert!((1..=4).all(|n| c.boundary(n).is_zero()), "{v}");
        }
    }

    #[test]
    fn second_boundary_of_d3() {
        let x = d3();
        let c = ChainComplex::point(&x, Variant::R, 2).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let col = c.index_of(0, &[a, b]).unwrap();
                let mut expected = vec![0i64; 3];
                expected[x.op(a, b)] += 1;
                expected[a] -= 1;
                let got: Vec<i64> = (0..3).map(|r| c.boundary(2).get(c.index_of(0, &[r]).unwrap(), col)).collect();
                assert_eq!(got, expected, "({a}, {b})");
            }
        }
        let q = ChainComplex::point(&x, Variant::Q, 2).unwrap();
        assert_eq!(q.index_of(0, &[1, 1]), None);
    }

    #[test]
    fn degree_checks() {
        let c = ChainComplex::point(&d3(), Variant::Q, 3).unwrap();
        assert!(matches!(c.homology(3), Err(HomologyError::DegreeOutOfRange { .. })));
        assert!(matches!(
            ChainComplex::build_with_budget(&d3(), &XSetAction::point(&d3()), Variant::R, 6, 100),
            Err(HomologyError::BudgetExceeded { degree: 5, .. })
        ));
    }

    #[test]
    fn late_degenerate_needs_point_coefficients() {
        let x = d3();
        let r = ChainComplex::build(&x, &XSetAction::quandle(&x), Variant::L, 4);
        assert!(matches!(r, Err(HomologyError::NotSubcomplex { .. })));
        assert!(ChainComplex::build(&x, &XSetAction::quandle(&x), Variant::D, 4).is_ok());
    }

    #[test]
    fn reduced_boundaries_keep_smith_forms() {
        for spec in ["dihedral:3", "dihedral:5", "gf:2^2:omega=t"] {
            let x = AlexanderQuandle::parse(spec).unwrap().quandle().clone();
            let group = x.inner_group().unwrap();
            let actions = [XSetAction::point(&x), XSetAction::quandle(&x), XSetAction::inner(&x, &group)];
            for (k, y) in actions.iter().enumerate() {
                let top = if k == 0 { 4 } else { 3 };
                for v in [Variant::R, Variant::D, Variant::Q] {
                    let c = ChainComplex::build(&x, y, v, top).unwrap();
                    for n in 1..=top {
                        let full = c.boundary(n).smith_form();
                        assert_eq!(c.smith_form(n), &full, "{spec} {v} degree {n}");
                        assert_eq!(c.rank_mod(n, 2), c.boundary(n).rank_mod(2), "{spec} {v} degree {n}");
                    }
                }
            }
        }
    }
}
