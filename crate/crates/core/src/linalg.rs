//! Exact linear algebra: determinants, incremental elimination for the
//! enumeration engine, and rational rank/kernel computations.
//!
//! The enumeration engine pushes candidate columns one at a time down a search
//! tree and needs to (a) detect linear dependence as early as possible and
//! (b) read off |det| at the leaves. Two interchangeable elimination states
//! implement this: a fraction-free integer one (Bareiss) used when the input
//! columns have been cleared to integers of reasonable size, and a plain
//! rational one used otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

pub trait Elimination: Clone {
    type Entry: Clone;

    fn new(dim: usize) -> Self;
    /// Adds a column; returns false (state unchanged) if it is linearly
    /// dependent on the columns already present.
    fn push(&mut self, col: &[Self::Entry]) -> bool;
    /// Removes the most recently pushed column. States are append-only, so
    /// push/pop backtracking needs no cloning.
    fn pop(&mut self);
    fn rank(&self) -> usize;
    /// |det| of the columns pushed so far; only meaningful at full rank.
    fn det_abs(&self) -> Scalar;
}

/// Column-wise Gaussian elimination over the rationals.
#[derive(Clone)]
pub struct RatElim {
    dim: usize,
    pivot_rows: Vec<usize>,
    cols: Vec<Vec<Scalar>>,
}

impl Elimination for RatElim {
    type Entry = Scalar;

    fn new(dim: usize) -> Self {
        RatElim {
            dim,
            pivot_rows: Vec::new(),
            cols: Vec::new(),
        }
    }

    fn push(&mut self, col: &[Scalar]) -> bool {
        debug_assert_eq!(col.len(), self.dim);
        let mut w = col.to_vec();
        for (k, &r) in self.pivot_rows.iter().enumerate() {
            if w[r].is_zero() {
                continue;
            }
            let factor = &w[r] / &self.cols[k][r];
            for i in 0..self.dim {
                if !self.cols[k][i].is_zero() {
                    let delta = &factor * &self.cols[k][i];
                    w[i] -= &delta;
                }
            }
        }
        let pivot = (0..self.dim).find(|i| !self.pivot_rows.contains(i) && !w[*i].is_zero());
        match pivot {
            None => false,
            Some(r) => {
                self.pivot_rows.push(r);
                self.cols.push(w);
                true
            }
        }
    }

    fn pop(&mut self) {
        self.pivot_rows.pop();
        self.cols.pop();
    }

    fn rank(&self) -> usize {
        self.cols.len()
    }

    fn det_abs(&self) -> Scalar {
        let mut acc = Scalar::one();
        for (k, &r) in self.pivot_rows.iter().enumerate() {
            acc *= &self.cols[k][r];
        }
        acc.abs()
    }
}

/// Fraction-free (Bareiss) elimination over the integers. Entries stay
/// integral throughout; the last pivot at full rank is +-det. Rows that are
/// pivots of earlier columns are zero in every later reduced column, so the
/// update loop touches only the still-active rows, and zero entries are
/// skipped (embedded bodies produce heavily block-sparse columns).
#[derive(Clone)]
pub struct IntElim {
    dim: usize,
    pivot_rows: Vec<usize>,
    /// pivot index of each row, dim for free rows
    row_stage: Vec<usize>,
    cols: Vec<Vec<BigInt>>,
    pivots: Vec<BigInt>,
}

impl IntElim {
    /// |det| of the pushed columns as an integer (full rank only).
    pub fn last_pivot_abs(&self) -> BigInt {
        match self.pivots.last() {
            None => BigInt::one(),
            Some(p) => p.abs(),
        }
    }
}

impl Elimination for IntElim {
    type Entry = BigInt;

    fn new(dim: usize) -> Self {
        IntElim {
            dim,
            pivot_rows: Vec::new(),
            row_stage: vec![dim; dim],
            cols: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn push(&mut self, col: &[BigInt]) -> bool {
        debug_assert_eq!(col.len(), self.dim);
        let mut w = col.to_vec();
        let mut prev = BigInt::one();
        for (k, &r) in self.pivot_rows.iter().enumerate() {
            let p = &self.pivots[k];
            let ck = &self.cols[k];
            let wr = std::mem::replace(&mut w[r], BigInt::zero());
            for i in 0..self.dim {
                if self.row_stage[i] <= k {
                    continue; // eliminated by an earlier pivot: stays zero
                }
                let wi_zero = w[i].is_zero();
                let ci_zero = wr.is_zero() || ck[i].is_zero();
                if wi_zero && ci_zero {
                    continue;
                }
                let num = if ci_zero {
                    p * &w[i]
                } else if wi_zero {
                    -(&wr * &ck[i])
                } else {
                    p * &w[i] - &wr * &ck[i]
                };
                if num.is_zero() {
                    w[i] = num;
                } else if k == 0 {
                    w[i] = num;
                } else {
                    debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                    w[i] = num / &prev;
                }
            }
            prev = p.clone();
        }
        let pivot = (0..self.dim).find(|&i| self.row_stage[i] == self.dim && !w[i].is_zero());
        match pivot {
            None => false,
            Some(r) => {
                self.row_stage[r] = self.pivot_rows.len();
                self.pivots.push(w[r].clone());
                self.pivot_rows.push(r);
                self.cols.push(w);
                true
            }
        }
    }

    fn pop(&mut self) {
        if let Some(r) = self.pivot_rows.pop() {
            self.row_stage[r] = self.dim;
        }
        self.cols.pop();
        self.pivots.pop();
    }

    fn rank(&self) -> usize {
        self.cols.len()
    }

    fn det_abs(&self) -> Scalar {
        Scalar::from_bigint(self.last_pivot_abs())
    }
}

/// Determinant of a square rational matrix (column vectors), by plain
/// Gaussian elimination. Used by the polarization oracle; deliberately
/// independent of the incremental engine above.
pub fn det_columns(cols: &[Vec<Scalar>]) -> Scalar {
    let n = cols.len();
    if n == 0 {
        return Scalar::one();
    }
    debug_assert!(cols.iter().all(|c| c.len() == n));
    let mut m: Vec<Vec<Scalar>> = cols.to_vec();
    let mut det = Scalar::one();
    let mut sign = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&j| !m[j][k].is_zero()) else {
            return Scalar::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for j in (k + 1)..n {
            if m[j][k].is_zero() {
                continue;
            }
            let factor = &m[j][k] / &pivot;
            for i in k..n {
                let delta = &factor * &m[k][i];
                m[j][i] -= &delta;
            }
        }
    }
    if sign {
        -det
    } else {
        det
    }
}

/// Row-reduces a rational matrix in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r] {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= &delta;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivot_cols
}

pub fn rank(matrix: &[Vec<Scalar>]) -> usize {
    let mut m = matrix.to_vec();
    row_reduce(&mut m).len()
}

/// Pivot columns of the row-reduced matrix: a deterministic maximal set of
/// linearly independent columns.
pub fn pivot_columns(matrix: &[Vec<Scalar>]) -> Vec<usize> {
    let mut m = matrix.to_vec();
    row_reduce(&mut m)
}

/// Basis of the right kernel {x : Mx = 0}, deterministic (one vector per free
/// column, unit at that column).
pub fn kernel_basis(matrix: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    let mut m = matrix.to_vec();
    let pivot_cols = row_reduce(&mut m);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scales a rational vector to a primitive integer vector with the first
/// nonzero coordinate positive. The zero vector maps to itself.
pub fn primitive_integer_direction(v: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if !content.is_zero() {
        for c in &mut ints {
            *c = &*c / &content;
        }
    }
    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in &mut ints {
                *c = -&*c;
            }
        }
    }
    ints
}

pub fn mat_vec(matrix: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    matrix
        .iter()
        .map(|row| {
            let mut acc = Scalar::zero();
            for (a, b) in row.iter().zip(v) {
                acc += &(a * b);
            }
            acc
        })
        .collect()
}
