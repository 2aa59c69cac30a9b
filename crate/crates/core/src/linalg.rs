//! Exact linear algebra: dense reduced row echelon form and nullspaces, a
//! sparse echelon basis with deterministic pivoting, and a fraction-free rank
//! over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::par;
use crate::scalar::{Field, Scalar};

/// Reduced row echelon form with leftmost pivots normalized to 1.
/// Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Scalar>], ncols: usize, field: Field) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    debug_assert!(m.iter().all(|row| row.iter().all(|x| x.field() == field)));
    (m, pivots)
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize, field: Field) -> usize {
    rref(rows, ncols, field).1.len()
}

/// A basis of `{ x : rows * x = 0 }`, one vector per free column.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize, field: Field) -> Vec<Vec<Scalar>> {
    let (r, pivots) = rref(rows, ncols, field);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -&row[free];
        }
        basis.push(v);
    }
    basis
}

/// Rank of an integer matrix by fraction-free elimination. Each row is
/// divided by the gcd of its entries after every step to keep entries small.
pub fn rank_fraction_free(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let a = pivot_row[c].clone();
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let b = row[c].clone();
            for j in c..ncols {
                row[j] = &a * &row[j] - &b * &pivot_row[j];
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && g.abs() != BigInt::from(1) {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A sparse vector with entries sorted by column, no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseRow(pub Vec<(usize, Scalar)>);

impl SparseRow {
    pub fn from_dense(row: &[Scalar]) -> SparseRow {
        SparseRow(row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect())
    }

    pub fn to_dense(&self, ncols: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); ncols];
        for (c, x) in &self.0 {
            out[*c] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.0.last()
    }

    pub fn get(&self, col: usize) -> Option<&Scalar> {
        self.0.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &self.0[i].1)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: &Scalar, other: &SparseRow) -> SparseRow {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take_left = j == other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0);
            let take_right = i == self.0.len() || (j < other.0.len() && other.0[j].0 < self.0[i].0);
            if take_left {
                out.push(self.0[i].clone());
                i += 1;
            } else if take_right {
                out.push((other.0[j].0, s * &other.0[j].1));
                j += 1;
            } else {
                let v = &self.0[i].1 + &(s * &other.0[j].1);
                if !v.is_zero() {
                    out.push((self.0[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseRow(out)
    }

    pub fn scale(&self, s: &Scalar) -> SparseRow {
        SparseRow(self.0.iter().map(|(c, x)| (*c, x * s)).filter(|(_, x)| !x.is_zero()).collect())
    }
}

/// An echelon basis of a row space whose pivots are the greatest nonzero
/// columns (leading terms). Rows are normalized so that the leading
/// coefficient is 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    rows: Vec<SparseRow>,
    pivot_row: Vec<Option<usize>>,
}

const BATCH: usize = 256;

impl Echelon {
    pub fn new(ncols: usize, field: Field) -> Self {
        Echelon { field, ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseRow> {
        self.pivot_row[col].map(|i| &self.rows[i])
    }

    /// Reduces the leading term until it is not a pivot column (or the row
    /// vanishes).
    pub fn head_reduce(&self, row: &SparseRow) -> SparseRow {
        let mut row = row.clone();
        while let Some((c, x)) = row.leading().cloned() {
            match self.pivot_row[c] {
                Some(p) => row = row.axpy(&-x, &self.rows[p]),
                None => break,
            }
        }
        row
    }

    /// Eliminates every pivot column from `row`.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut row = row.clone();
        // Walk columns from the top down; eliminating a pivot only touches
        // smaller columns.
        let mut bound = usize::MAX;
        loop {
            let next = row.0.iter().rev().find(|(c, _)| *c < bound && self.pivot_row[*c].is_some()).cloned();
            match next {
                Some((c, x)) => {
                    row = row.axpy(&-x, &self.rows[self.pivot_row[c].unwrap()]);
                    bound = c;
                }
                None => break,
            }
        }
        row
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let reduced = self.head_reduce(row);
        self.push_reduced(reduced)
    }

    fn push_reduced(&mut self, reduced: SparseRow) -> bool {
        let Some((c, x)) = reduced.leading().cloned() else { return false };
        let normalized = reduced.scale(&x.inv().expect("leading coefficient is nonzero"));
        self.pivot_row[c] = Some(self.rows.len());
        self.rows.push(normalized);
        true
    }

    /// Inserts many rows. Each batch is head-reduced against the current
    /// basis in parallel, then inserted in input order.
    pub fn extend(&mut self, rows: &[SparseRow]) {
        for chunk in rows.chunks(BATCH) {
            let pre = {
                let this = &*self;
                par::map(chunk, |r| this.head_reduce(r))
            };
            for r in pre {
                if !r.is_zero() {
                    let r = self.head_reduce(&r);
                    self.push_reduced(r);
                }
            }
        }
    }

    /// Brings the basis to fully reduced form: every row has zeros in all
    /// other pivot columns.
    pub fn interreduce(&mut self) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i].leading().unwrap().0);
        let mut done = Echelon::new(self.ncols, self.field);
        for i in order {
            let row = &self.rows[i];
            let (lead_col, _) = row.leading().unwrap().clone();
            let tail = SparseRow(row.0[..row.0.len() - 1].to_vec());
            let mut reduced = done.reduce(&tail);
            reduced.0.push((lead_col, self.field.one()));
            done.pivot_row[lead_col] = Some(done.rows.len());
            done.rows.push(reduced);
        }
        *self = done;
    }
}
