use std::sync::Arc;

use num_bigint::BigInt;

use super::snf::{normalize_diagonal, Big, CheckedI64, Elimination, FieldRing, PrimeField, Ring};
use crate::field::{Field, FieldElement};

/// A sparse row-major integer matrix.
///
/// Entries are stored as `i64`; eliminations switch to arbitrary precision when
/// intermediate values would overflow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(u32, i64)>>,
}

/// Smith normal form data: rank and the invariant factors d_1 | d_2 | ... of the
/// nonzero diagonal. Unit factors are only counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    pub ones: usize,
    pub nontrivial: Vec<BigInt>,
}

impl SmithForm {
    /// The full diagonal, unit factors included.
    pub fn invariants(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::from(1); self.ones];
        out.extend(self.nontrivial.iter().cloned());
        out
    }
}

impl IntegerMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntegerMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Builds from (row, col, value) triples; repeated positions are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut rows: Vec<Vec<(u32, i64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "entry ({r}, {c}) outside {nrows}x{ncols}");
            rows[r].push((c as u32, v));
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(u32, i64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
        IntegerMatrix { nrows, ncols, rows }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let triplets =
            rows.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        IntegerMatrix::from_triplets(rows.len(), ncols, triplets)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(u32, i64)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let row = &self.rows[r];
        row.binary_search_by_key(&(c as u32), |e| e.0).map_or(0, |k| row[k].1)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut rows: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                rows[c as usize].push((r as u32, v));
            }
        }
        IntegerMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    /// The product self * other.
    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut acc: Vec<i64> = vec![0; other.ncols];
        let mut seen = vec![false; other.ncols];
        let mut touched: Vec<u32> = Vec::new();
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            for &(k, a) in row {
                for &(c, b) in &other.rows[k as usize] {
                    if !std::mem::replace(&mut seen[c as usize], true) {
                        touched.push(c);
                    }
                    acc[c as usize] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::new();
            for &c in &touched {
                let v = std::mem::take(&mut acc[c as usize]);
                seen[c as usize] = false;
                if v != 0 {
                    out.push((c, v));
                }
            }
            touched.clear();
            rows.push(out);
        }
        IntegerMatrix { nrows: self.nrows, ncols: other.ncols, rows }
    }

    /// Smith normal form over Z.
    pub fn smith_form(&self) -> SmithForm {
        self.smith_form_with_pivots().0
    }

    /// Smith form together with the columns that were eliminated with unit pivots
    /// (in elimination order).
    pub(crate) fn smith_form_with_pivots(&self) -> (SmithForm, Vec<usize>) {
        // eliminate along the shorter side: fewer pivots to search, same invariants
        let flip = self.nrows > self.ncols;
        let m = if flip { self.transpose() } else { self.clone() };
        let (diagonal, pivots): (Vec<BigInt>, Vec<(u32, u32)>) =
            match Elimination::new(&CheckedI64, m.ncols, m.rows.clone()).run() {
                Ok(done) => {
                    let mut d: Vec<BigInt> = vec![BigInt::from(1); done.units];
                    d.extend(done.others.into_iter().map(BigInt::from));
                    (d, done.unit_pivots)
                }
                Err(_) => {
                    let rows =
                        m.rows.iter().map(|row| row.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()).collect();
                    match Elimination::new(&Big, m.ncols, rows).run() {
                        Ok(done) => {
                            let mut d: Vec<BigInt> = vec![BigInt::from(1); done.units];
                            d.extend(done.others);
                            (d, done.unit_pivots)
                        }
                        Err(_) => unreachable!("arbitrary precision never overflows"),
                    }
                }
            };
        let rank = diagonal.len();
        let nonunit: Vec<BigInt> =
            diagonal.into_iter().filter(|d| d != &BigInt::from(1) && d != &BigInt::from(-1)).collect();
        let nontrivial = normalize_diagonal(nonunit);
        let columns = pivots.into_iter().map(|(r, c)| if flip { r } else { c } as usize).collect();
        (SmithForm { rank, ones: rank - nontrivial.len(), nontrivial }, columns)
    }

    /// The submatrix on the given rows and columns (both sorted).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntegerMatrix {
        let mut new_col = vec![u32::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            new_col[c] = k as u32;
        }
        let rows = rows
            .iter()
            .map(|&r| {
                self.rows[r]
                    .iter()
                    .filter(|e| new_col[e.0 as usize] != u32::MAX)
                    .map(|&(c, v)| (new_col[c as usize], v))
                    .collect()
            })
            .collect::<Vec<_>>();
        IntegerMatrix { nrows: rows.len(), ncols: cols.len(), rows }
    }

    /// Rank over F_p.
    pub fn rank_mod(&self, p: u64) -> usize {
        assert!((2..(1 << 31)).contains(&p), "prime out of supported range");
        let ring = PrimeField(p);
        let m = if self.nrows > self.ncols { self.transpose() } else { self.clone() };
        let rows = m
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|&(c, v)| {
                        let r = v.rem_euclid(p as i64) as u64;
                        (r != 0).then_some((c, r))
                    })
                    .collect()
            })
            .collect();
        rank_of(&ring, m.ncols, rows)
    }
}

fn rank_of<R: Ring>(ring: &R, ncols: usize, rows: Vec<Vec<(u32, R::E)>>) -> usize {
    match Elimination::new(ring, ncols, rows).run() {
        Ok(done) => done.units + done.others.len(),
        Err(_) => unreachable!("field arithmetic never overflows"),
    }
}

/// Rank over a finite field of a matrix given by sparse rows of field elements.
pub fn field_rank(field: &Arc<Field>, ncols: usize, rows: Vec<Vec<(u32, FieldElement)>>) -> usize {
    let ring = FieldRing(field.clone());
    let rows = rows
        .into_iter()
        .map(|mut row| {
            row.sort_unstable_by_key(|e| e.0);
            row.retain(|e| e.1.index() != 0);
            row
        })
        .collect();
    rank_of(&ring, ncols, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invariants(rows: &[Vec<i64>]) -> Vec<i64> {
        IntegerMatrix::from_dense(rows).smith_form().invariants().iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(invariants(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(invariants(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        let zero = IntegerMatrix::zeros(3, 4).smith_form();
        assert_eq!((zero.rank, zero.invariants().len()), (0, 0));
        assert_eq!(invariants(&[vec![6, 10, 15]]), vec![1]);
        assert_eq!(invariants(&[vec![4, 0], vec![0, 6], vec![0, 0]]), vec![2, 12]);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = 3_000_000_000i64;
        let m = [vec![big, big + 1], vec![big - 1, big]];
        // det = big^2 - (big^2 - 1) = 1
        assert_eq!(invariants(&m), vec![1, 1]);
        let m = [vec![big * 2, 0], vec![0, big * 3]];
        let f = IntegerMatrix::from_dense(&m).smith_form();
        assert_eq!(f.nontrivial, vec![BigInt::from(big), BigInt::from(big) * 6]);
    }

    #[test]
    fn rank_mod_p() {
        let m = IntegerMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.rank_mod(2), 0);
        assert_eq!(m.rank_mod(3), 2);
        assert_eq!(IntegerMatrix::from_dense(&[vec![3, 6], vec![1, 2]]).rank_mod(5), 1);
    }
}
