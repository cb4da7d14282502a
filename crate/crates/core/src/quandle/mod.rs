//! Finite quandles given by operation tables.
//!
//! Elements are `0..n`; `op(x, y)` is `x * y`, i.e. row `x`, column `y` of the table.

mod alexander;
mod inner;
mod xset;

use std::fmt::Write as _;

pub use alexander::{AlexanderModule, AlexanderQuandle, AlexanderSpec, InnStructureReport, Regularity};
pub use inner::{InnerGroup, Perm, DEFAULT_GROUP_CAP};
pub use xset::{CoefficientKind, XSetAction};

use crate::field::FieldError;
use crate::textpoly::PolyParseError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuandleError {
    #[error("x*x != x for x = {0}")]
    NotIdempotent(usize),
    #[error("right translation by {0} is not a bijection")]
    NotRightInvertible(usize),
    #[error("(x*y)*z != (x*z)*(y*z) for (x, y, z) = ({0}, {1}, {2})")]
    NotDistributive(usize, usize, usize),
    #[error("table is not square or is empty")]
    NotSquare,
    #[error("entry {value} at ({row}, {col}) is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("inner automorphism group exceeds the cap of {0} elements")]
    GroupTooLarge(usize),
    #[error("T is not invertible on the module")]
    NonUnitT,
    #[error("omega must differ from 0 and 1")]
    OmegaTrivial,
    #[error("malformed quandle description: {0}")]
    BadSpec(String),
    #[error("malformed quandle table file: {0}")]
    BadTableFile(String),
    #[error("X-set relation fails for x = {x}, y = {y} at carrier point {point}")]
    XSetRelation { x: usize, y: usize, point: usize },
    #[error("X-set permutation for {0} is not a bijection of the carrier")]
    XSetNotPermutation(usize),
    #[error("quandle is too large: {0} elements")]
    TooLarge(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyParseError),
}

/// How a quandle was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Alexander,
    Dihedral,
    Trivial,
    Product,
    UserTable,
}

/// A finite quandle with validated axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuandle {
    n: usize,
    table: Vec<u32>,
    provenance: Provenance,
}

const MAX_ORDER: usize = 1 << 15;

impl FiniteQuandle {
    /// Checks the three axioms and reports the first violation with a witness.
    pub fn validate(rows: &[Vec<usize>]) -> Result<FiniteQuandle, QuandleError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(QuandleError::NotSquare);
        }
        if n > MAX_ORDER {
            return Err(QuandleError::TooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(QuandleError::OutOfRange { row, col, value });
                }
                table.push(value as u32);
            }
        }
        Self::from_flat(n, table, Provenance::UserTable)
    }

    pub(crate) fn from_flat(n: usize, table: Vec<u32>, provenance: Provenance) -> Result<FiniteQuandle, QuandleError> {
        let q = FiniteQuandle { n, table, provenance };
        q.check_axioms()?;
        Ok(q)
    }

    fn check_axioms(&self) -> Result<(), QuandleError> {
        let n = self.n;
        if let Some(x) = (0..n).find(|&x| self.op(x, x) != x) {
            return Err(QuandleError::NotIdempotent(x));
        }
        let mut seen = vec![usize::MAX; n];
        for y in 0..n {
            for x in 0..n {
                let v = self.op(x, y);
                if seen[v] == y {
                    return Err(QuandleError::NotRightInvertible(y));
                }
                seen[v] = y;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = self.op(x, y);
                for z in 0..n {
                    if self.op(xy, z) != self.op(self.op(x, z), self.op(y, z)) {
                        return Err(QuandleError::NotDistributive(x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    /// The trivial quandle T_l, with x * y = x.
    pub fn trivial(l: usize) -> FiniteQuandle {
        assert!(l >= 1, "trivial quandle needs at least one element");
        let table = (0..l).flat_map(|x| std::iter::repeat_n(x as u32, l)).collect();
        FiniteQuandle { n: l, table, provenance: Provenance::Trivial }
    }

    /// Coordinatewise product; the pair (x, y) gets index x * |other| + y.
    pub fn product(&self, other: &FiniteQuandle) -> FiniteQuandle {
        let (a, b) = (self.n, other.n);
        let n = a * b;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let first = self.op(x / b, y / b);
                let second = other.op(x % b, y % b);
                table.push((first * b + second) as u32);
            }
        }
        FiniteQuandle { n, table, provenance: Provenance::Product }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| (0..self.n).map(|y| self.op(x, y)).collect()).collect()
    }

    /// The right translation `x -> x * y` as a permutation.
    pub fn right_translation(&self, y: usize) -> Perm {
        (0..self.n).map(|x| self.op(x, y) as u32).collect()
    }

    /// The inverse operation: the unique z with z * y = x.
    pub fn left_divide(&self, x: usize, y: usize) -> usize {
        (0..self.n).find(|&z| self.op(z, y) == x).expect("right translations are bijective")
    }

    /// Orbits of the inner automorphism group, each sorted, ordered by least element.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in 0..self.n {
            for y in 0..self.n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, self.op(x, y)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.n];
        for x in 0..self.n {
            let r = find(&mut parent, x);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(x);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    pub fn inner_group(&self) -> Result<InnerGroup, QuandleError> {
        InnerGroup::generate(self, DEFAULT_GROUP_CAP)
    }

    pub fn inner_group_with_cap(&self, cap: usize) -> Result<InnerGroup, QuandleError> {
        InnerGroup::generate(self, cap)
    }

    /// Text form: `quandle v1`, `n=<count>`, then one row per line.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("quandle v1\nn={}\n", self.n);
        for x in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|y| self.op(x, y).to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }

    pub fn from_table_text(text: &str) -> Result<FiniteQuandle, QuandleError> {
        let bad = |m: &str| QuandleError::BadTableFile(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("quandle v1") {
            return Err(bad("first line must be `quandle v1`"));
        }
        let n: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("n="))
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad("second line must be `n=<count>`"))?;
        let rows: Vec<Vec<usize>> = lines
            .map(|l| l.split_whitespace().map(|t| t.parse().map_err(|_| bad(&format!("bad entry {t:?}")))).collect())
            .collect::<Result<_, _>>()?;
        if rows.len() != n {
            return Err(bad(&format!("expected {n} rows, found {}", rows.len())));
        }
        Self::validate(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> FiniteQuandle {
        FiniteQuandle::validate(&[vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).unwrap()
    }

    #[test]
    fn validation_reports_witnesses() {
        assert!(FiniteQuandle::validate(&[vec![0]]).is_ok());
        assert_eq!(FiniteQuandle::validate(&[vec![1, 0], vec![1, 1]]), Err(QuandleError::NotIdempotent(0)));
        assert_eq!(FiniteQuandle::validate(&[vec![0, 0], vec![0, 1]]), Err(QuandleError::NotRightInvertible(0)));
        let rows = vec![vec![0, 2, 0], vec![2, 1, 1], vec![1, 0, 2]];
        assert_eq!(FiniteQuandle::validate(&rows), Err(QuandleError::NotDistributive(0, 1, 0)));
        assert_eq!(
            FiniteQuandle::validate(&[vec![0, 5], vec![0, 1]]),
            Err(QuandleError::OutOfRange { row: 0, col: 1, value: 5 })
        );
    }

    #[test]
    fn dihedral_three_is_connected() {
        let q = d3();
        assert!(q.is_connected());
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(q.op(x, y), (2 * y + 3 - x) % 3);
            }
        }
    }

    #[test]
    fn trivial_components() {
        assert_eq!(FiniteQuandle::trivial(3).connected_components(), vec![vec![0], vec![1], vec![2]]);
        let t2 = FiniteQuandle::trivial(2);
        assert!((0..2).all(|y| t2.right_translation(y) == vec![0, 1]));
    }

    #[test]
    fn products() {
        let t1 = FiniteQuandle::trivial(1);
        assert_eq!(t1.product(&d3()).rows(), d3().rows());
        assert_eq!(
            FiniteQuandle::trivial(2).product(&FiniteQuandle::trivial(2)).rows(),
            FiniteQuandle::trivial(4).rows()
        );
        let dd = d3().product(&d3());
        assert!(dd.check_axioms().is_ok());
        assert!(dd.is_connected());
    }

    #[test]
    fn table_text_round_trip() {
        let text = d3().to_table_text();
        assert_eq!(FiniteQuandle::from_table_text(&text).unwrap().rows(), d3().rows());
        assert!(FiniteQuandle::from_table_text("quandle v1\nn=2\n0 1\n").is_err());
    }
}
