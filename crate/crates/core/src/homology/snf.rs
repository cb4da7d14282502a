//! Sparse elimination over Euclidean rings.
//!
//! Phase one pivots on units, choosing short columns and then short rows to limit
//! fill-in. Phase two handles what is left with minimal-size pivots and Euclidean
//! reduction in the pivot's row and column until the pivot is isolated. The integer
//! path runs in checked `i64` arithmetic and restarts with `BigInt` on overflow.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{Field, FieldElement};

pub(crate) trait Ring {
    type E: Clone + std::fmt::Debug;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_unit(&self, a: &Self::E) -> bool;
    fn cmp_size(&self, a: &Self::E, b: &Self::E) -> Ordering;
    /// A quotient q with size(a - qb) < size(b); exact when b divides a. `None` on overflow.
    fn quo(&self, a: &Self::E, b: &Self::E) -> Option<Self::E>;
    /// a - q b, `None` on overflow.
    fn sub_mul(&self, a: &Self::E, q: &Self::E, b: &Self::E) -> Option<Self::E>;
    /// -q b, `None` on overflow.
    fn neg_mul(&self, q: &Self::E, b: &Self::E) -> Option<Self::E>;
}

pub(crate) struct CheckedI64;

impl Ring for CheckedI64 {
    type E = i64;
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &i64) -> bool {
        *a == 1 || *a == -1
    }
    fn cmp_size(&self, a: &i64, b: &i64) -> Ordering {
        a.unsigned_abs().cmp(&b.unsigned_abs())
    }
    fn quo(&self, a: &i64, b: &i64) -> Option<i64> {
        // nearest-integer quotient keeps remainders at most |b|/2
        let q = a.checked_div(*b)?;
        let r = a.checked_sub(q.checked_mul(*b)?)?;
        let twice = r.checked_abs()?.checked_mul(2)?;
        if twice > b.checked_abs()? {
            if (r < 0) == (*b < 0) {
                q.checked_add(1)
            } else {
                q.checked_sub(1)
            }
        } else {
            Some(q)
        }
    }
    fn sub_mul(&self, a: &i64, q: &i64, b: &i64) -> Option<i64> {
        a.checked_sub(q.checked_mul(*b)?)
    }
    fn neg_mul(&self, q: &i64, b: &i64) -> Option<i64> {
        q.checked_mul(*b)?.checked_neg()
    }
}

pub(crate) struct Big;

impl Ring for Big {
    type E = BigInt;
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn cmp_size(&self, a: &BigInt, b: &BigInt) -> Ordering {
        a.magnitude().cmp(b.magnitude())
    }
    fn quo(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        let (q, r) = a.div_rem(b);
        if (&r.abs() * 2u32) > b.abs() {
            Some(if r.is_negative() == b.is_negative() { q + 1 } else { q - 1 })
        } else {
            Some(q)
        }
    }
    fn sub_mul(&self, a: &BigInt, q: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a - q * b)
    }
    fn neg_mul(&self, q: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(-(q * b))
    }
}

/// Z/p for a prime p < 2^32.
pub(crate) struct PrimeField(pub u64);

impl PrimeField {
    fn inv(&self, a: u64) -> u64 {
        let (mut base, mut e, mut acc) = (a % self.0, self.0 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            e >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn cmp_size(&self, a: &u64, b: &u64) -> Ordering {
        (*a != 0).cmp(&(*b != 0))
    }
    fn quo(&self, a: &u64, b: &u64) -> Option<u64> {
        Some(a * self.inv(*b) % self.0)
    }
    fn sub_mul(&self, a: &u64, q: &u64, b: &u64) -> Option<u64> {
        Some((a + self.0 - q * b % self.0) % self.0)
    }
    fn neg_mul(&self, q: &u64, b: &u64) -> Option<u64> {
        Some((self.0 - q * b % self.0) % self.0)
    }
}

/// A finite field given by tables.
pub(crate) struct FieldRing(pub Arc<Field>);

impl Ring for FieldRing {
    type E = FieldElement;
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.index() == 0
    }
    fn is_unit(&self, a: &FieldElement) -> bool {
        a.index() != 0
    }
    fn cmp_size(&self, a: &FieldElement, b: &FieldElement) -> Ordering {
        (a.index() != 0).cmp(&(b.index() != 0))
    }
    fn quo(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.0.div(*a, *b).ok()
    }
    fn sub_mul(&self, a: &FieldElement, q: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        Some(self.0.sub(*a, self.0.mul(*q, *b)))
    }
    fn neg_mul(&self, q: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        Some(self.0.neg(self.0.mul(*q, *b)))
    }
}

const MARKOWITZ_CANDIDATES: usize = 8;

pub(crate) struct Overflow;

/// Outcome of an elimination: the unit pivots as (row, column), plus the pivots left
/// for the Euclidean phase (unit or not).
pub(crate) struct Eliminated<E> {
    pub unit_pivots: Vec<(u32, u32)>,
    pub units: usize,
    pub others: Vec<E>,
}

pub(crate) struct Elimination<'a, R: Ring> {
    ring: &'a R,
    rows: Vec<Vec<(u32, R::E)>>,
    // row lists per column; may hold stale or repeated rows until `column` tidies them
    cols: Vec<Vec<u32>>,
    col_len: Vec<u32>,
    pivots: Vec<(u32, u32)>,
    units: usize,
    others: Vec<R::E>,
}

impl<'a, R: Ring> Elimination<'a, R> {
    /// `rows[i]` must be sorted by column with nonzero entries.
    pub fn new(ring: &'a R, ncols: usize, rows: Vec<Vec<(u32, R::E)>>) -> Self {
        let mut cols = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            for (c, _) in row {
                cols[*c as usize].push(i as u32);
            }
        }
        let col_len = cols.iter().map(|l| l.len() as u32).collect();
        Elimination { ring, rows, cols, col_len, pivots: Vec::new(), units: 0, others: Vec::new() }
    }

    pub fn run(mut self) -> Result<Eliminated<R::E>, Overflow> {
        self.unit_phase()?;
        self.general_phase()?;
        let units = self.pivots.len() + self.units;
        Ok(Eliminated { unit_pivots: self.pivots, units, others: self.others })
    }

    fn entry(&self, r: usize, c: u32) -> Option<&R::E> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
    }

    /// The rows with a nonzero entry in column c, in increasing order.
    fn column(&mut self, c: u32) -> Vec<u32> {
        let mut list = std::mem::take(&mut self.cols[c as usize]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| self.entry(r as usize, c).is_some());
        debug_assert_eq!(list.len(), self.col_len[c as usize] as usize);
        self.cols[c as usize] = list.clone();
        list
    }

    /// rows[i] -= q * rows[r].
    fn axpy(&mut self, i: usize, q: &R::E, r: usize) -> Result<(), Overflow> {
        let a = std::mem::take(&mut self.rows[i]);
        let b = &self.rows[r];
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        let ring = self.ring;
        let iu = i as u32;
        while x < a.len() || y < b.len() {
            let ca = a.get(x).map(|e| e.0).unwrap_or(u32::MAX);
            let cb = b.get(y).map(|e| e.0).unwrap_or(u32::MAX);
            match ca.cmp(&cb) {
                Ordering::Less => {
                    out.push(a[x].clone());
                    x += 1;
                }
                Ordering::Greater => {
                    let v = ring.neg_mul(q, &b[y].1).ok_or(Overflow)?;
                    if !ring.is_zero(&v) {
                        out.push((cb, v));
                        self.cols[cb as usize].push(iu);
                        self.col_len[cb as usize] += 1;
                    }
                    y += 1;
                }
                Ordering::Equal => {
                    let v = ring.sub_mul(&a[x].1, q, &b[y].1).ok_or(Overflow)?;
                    if ring.is_zero(&v) {
                        self.col_len[ca as usize] -= 1;
                    } else {
                        out.push((ca, v));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        self.rows[i] = out;
        Ok(())
    }

    fn remove_row(&mut self, r: usize) -> Vec<(u32, R::E)> {
        let row = std::mem::take(&mut self.rows[r]);
        for (c, _) in &row {
            self.col_len[*c as usize] -= 1;
        }
        row
    }

    /// Clears column c against the unit pivot at (r, c) and drops row r and column c.
    fn unit_pivot(&mut self, r: usize, c: u32, heap: &mut BinaryHeap<Reverse<(u32, u32)>>) -> Result<(), Overflow> {
        let pivot = self.entry(r, c).expect("pivot present").clone();
        let others: Vec<u32> = self.column(c).into_iter().filter(|&i| i as usize != r).collect();
        for i in others {
            let a = self.entry(i as usize, c).expect("column entry present").clone();
            let q = self.ring.quo(&a, &pivot).ok_or(Overflow)?;
            self.axpy(i as usize, &q, r)?;
        }
        let row = self.remove_row(r);
        for (col, _) in row {
            let len = self.col_len[col as usize];
            if len > 0 {
                heap.push(Reverse((len, col)));
            }
        }
        debug_assert_eq!(self.col_len[c as usize], 0);
        self.cols[c as usize].clear();
        self.pivots.push((r as u32, c));
        Ok(())
    }

    /// The shortest row with a unit entry in column c.
    fn best_unit_row(&mut self, c: u32) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for r in self.column(c) {
            let r = r as usize;
            let v = self.entry(r, c).expect("column entry present");
            if self.ring.is_unit(v) {
                let len = self.rows[r].len();
                if best.is_none_or(|(bl, br)| (len, r) < (bl, br)) {
                    best = Some((len, r));
                }
            }
        }
        best.map(|(_, r)| r)
    }

    fn unit_phase(&mut self) -> Result<(), Overflow> {
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> =
            self.col_len.iter().enumerate().filter(|(_, &l)| l > 0).map(|(c, &l)| Reverse((l, c as u32))).collect();
        let mut deferred: Vec<u32> = Vec::new();
        let mut candidates: Vec<(usize, usize, u32)> = Vec::with_capacity(MARKOWITZ_CANDIDATES);
        loop {
            loop {
                // Markowitz cost (row - 1)(col - 1) over the unit entries of a few short columns
                candidates.clear();
                while candidates.len() < MARKOWITZ_CANDIDATES {
                    let Some(Reverse((len, c))) = heap.pop() else { break };
                    let current = self.col_len[c as usize];
                    if current == 0 {
                        continue;
                    }
                    if current != len {
                        heap.push(Reverse((current, c)));
                        continue;
                    }
                    match self.best_unit_row(c) {
                        Some(r) => {
                            let cost = (self.rows[r].len() - 1) * (current as usize - 1);
                            candidates.push((cost, r, c));
                            if cost == 0 {
                                break;
                            }
                        }
                        None => deferred.push(c),
                    }
                }
                let Some(&best) = candidates.iter().min() else { break };
                for &(_, _, c) in &candidates {
                    if c != best.2 {
                        heap.push(Reverse((self.col_len[c as usize], c)));
                    }
                }
                self.unit_pivot(best.1, best.2, &mut heap)?;
            }
            deferred.sort_unstable();
            deferred.dedup();
            let mut still = Vec::new();
            for c in std::mem::take(&mut deferred) {
                if self.col_len[c as usize] == 0 {
                    continue;
                }
                if self.best_unit_row(c).is_some() {
                    heap.push(Reverse((self.col_len[c as usize], c)));
                } else {
                    still.push(c);
                }
            }
            deferred = still;
            if heap.is_empty() {
                return Ok(());
            }
        }
    }

    fn general_phase(&mut self) -> Result<(), Overflow> {
        loop {
            // smallest entry, ties broken by fill estimate then position
            let mut best: Option<(usize, u32)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                for (c, v) in row {
                    let better = match best {
                        None => true,
                        Some((br, bc)) => {
                            let bv = self.entry(br, bc).unwrap();
                            match self.ring.cmp_size(v, bv) {
                                Ordering::Less => true,
                                Ordering::Greater => false,
                                Ordering::Equal => {
                                    let cost = row.len() * self.col_len[*c as usize] as usize;
                                    cost < self.rows[br].len() * self.col_len[bc as usize] as usize
                                }
                            }
                        }
                    };
                    if better {
                        best = Some((r, *c));
                    }
                }
            }
            let Some((mut r, mut c)) = best else { return Ok(()) };
            loop {
                // reduce the column against the pivot
                let pivot = self.entry(r, c).unwrap().clone();
                let others: Vec<u32> = self.column(c).into_iter().filter(|&i| i as usize != r).collect();
                for i in others {
                    let a = self.entry(i as usize, c).unwrap().clone();
                    let q = self.ring.quo(&a, &pivot).ok_or(Overflow)?;
                    self.axpy(i as usize, &q, r)?;
                }
                let remaining = self.column(c);
                if let Some(&smaller) = remaining.iter().find(|&&i| i as usize != r) {
                    // a nonzero remainder is smaller than the pivot: move there
                    let mut cand = smaller as usize;
                    for &i in &remaining {
                        if i as usize != r
                            && self.ring.cmp_size(self.entry(i as usize, c).unwrap(), self.entry(cand, c).unwrap())
                                == Ordering::Less
                        {
                            cand = i as usize;
                        }
                    }
                    r = cand;
                    continue;
                }
                // column is clean: column operations only touch row r
                let row = std::mem::take(&mut self.rows[r]);
                let mut kept = Vec::with_capacity(row.len());
                for (j, v) in row {
                    if j == c {
                        kept.push((j, v));
                        continue;
                    }
                    let q = self.ring.quo(&v, &pivot).ok_or(Overflow)?;
                    let rem = self.ring.sub_mul(&v, &q, &pivot).ok_or(Overflow)?;
                    if self.ring.is_zero(&rem) {
                        self.col_len[j as usize] -= 1;
                    } else {
                        kept.push((j, rem));
                    }
                }
                self.rows[r] = kept;
                if self.rows[r].len() == 1 {
                    self.remove_row(r);
                    if self.ring.is_unit(&pivot) {
                        self.units += 1;
                    } else {
                        self.others.push(pivot);
                    }
                    break;
                }
                let mut next = None;
                for (j, v) in &self.rows[r] {
                    if *j != c && next.is_none_or(|(_, w): (u32, &R::E)| self.ring.cmp_size(v, w) == Ordering::Less) {
                        next = Some((*j, v));
                    }
                }
                c = next.unwrap().0;
            }
        }
    }
}

/// Puts nonzero diagonal entries into divisibility-chain form, dropping units.
pub(crate) fn normalize_diagonal(entries: Vec<BigInt>) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = entries.into_iter().map(|x| x.abs()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|x| !x.is_one());
    d
}
