//! Sparse exact matrices over a field, with fraction-free elimination for
//! rank, reduced row echelon kernels, and unipotent/triangular inversion.
//!
//! Storage is a sparse triplet map (no explicit zeros); elimination densifies.
//! Indices are 0-based throughout. The `unit1`/`entry1` helpers speak the
//! 1-based matrix-unit dialect used by the verification code.

use crate::error::Error;
use crate::scalar::{Field, Q};
use num::One;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix<F: Field = Q> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), F>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), F::one());
        }
        m
    }

    /// Matrix with a single 1 at 1-based position (i, j), size n×n.
    pub fn unit1(n: usize, i: usize, j: usize) -> Self {
        assert!(
            (1..=n).contains(&i) && (1..=n).contains(&j),
            "unit1 index out of range"
        );
        let mut m = Self::zero(n, n);
        m.entries.insert((i - 1, j - 1), F::one());
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut m = Self::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(F::zero)
    }

    /// 1-based accessor matching the e_{ij} convention.
    pub fn entry1(&self, i: usize, j: usize) -> F {
        self.get(i - 1, j - 1)
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            m.entries.insert((c, r), v.clone());
        }
        m
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero(self.rows, self.cols);
        }
        let mut m = Self::zero(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            m.set(r, c, v.clone() * k.clone());
        }
        m
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                lhs: (self.rows, self.cols),
                rhs: (other.rows, other.cols),
            });
        }
        let mut m = self.clone();
        for (&(r, c), v) in &other.entries {
            let sum = m.get(r, c) + v.clone();
            m.set(r, c, sum);
        }
        Ok(m)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.checked_add(&other.scale(&(-F::one())))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                lhs: (self.rows, self.cols),
                rhs: (other.rows, other.cols),
            });
        }
        // Row index of `other` so the product walks only stored entries.
        let mut rows_of_b: Vec<Vec<(usize, &F)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            rows_of_b[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), F> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &rows_of_b[k] {
                let term = a.clone() * b.clone();
                match acc.get_mut(&(i, j)) {
                    Some(e) => *e = e.clone() + term,
                    None => {
                        acc.insert((i, j), term);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(ExactMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        })
    }

    pub fn pow(&self, e: usize) -> Self {
        assert_eq!(self.rows, self.cols, "pow needs a square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("square");
        }
        acc
    }

    fn to_dense(&self) -> Vec<Vec<F>> {
        let mut d = vec![vec![F::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.clone();
        }
        d
    }

    /// Rank by fraction-free (Bareiss) elimination. Every intermediate entry
    /// is a quotient of minors, so divisions are exact and coefficient growth
    /// stays polynomial.
    pub fn rank(&self) -> usize {
        let mut a = self.to_dense();
        let (m, n) = (self.rows, self.cols);
        let mut prev = F::one();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            if row >= m {
                break;
            }
            let pivot = (row..m).find(|&r| !a[r][col].is_zero());
            let Some(p) = pivot else { continue };
            a.swap(row, p);
            for r in row + 1..m {
                for c in col + 1..n {
                    let num = a[row][col].clone() * a[r][c].clone()
                        - a[r][col].clone() * a[row][c].clone();
                    a[r][c] = num / prev.clone();
                }
                a[r][col] = F::zero();
            }
            prev = a[row][col].clone();
            row += 1;
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    fn rref(&self) -> (Vec<Vec<F>>, Vec<usize>) {
        let mut a = self.to_dense();
        let (m, n) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row >= m {
                break;
            }
            let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].inv();
            for c in col..n {
                a[row][c] = a[row][c].clone() * inv.clone();
            }
            for r in 0..m {
                if r != row && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in col..n {
                        a[r][c] = a[r][c].clone() - factor.clone() * a[row][c].clone();
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// Exact basis of the (right) kernel, one column vector per free variable.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (a, pivots) = self.rref();
        let n = self.cols;
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..n {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); n];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse of `1 + N` with `N` nilpotent, by the finite geometric series
    /// `Σ (−N)^k`. Errors when the diagonal is not all ones or the off-part
    /// fails to nilpotate within `rows` steps.
    pub fn unipotent_inverse(&self) -> Result<Self, Error> {
        if self.rows != self.cols {
            return Err(Error::NotUnipotent("matrix is not square".into()));
        }
        let n = self.rows;
        for i in 0..n {
            if !self.get(i, i).is_one() {
                return Err(Error::NotUnipotent(format!(
                    "diagonal entry at ({i}, {i}) is not 1"
                )));
            }
        }
        let nil = self.checked_sub(&Self::identity(n)).expect("square");
        let mut acc = Self::identity(n);
        let mut power = Self::identity(n);
        let minus_nil = nil.scale(&(-F::one()));
        for _ in 0..n {
            power = power.checked_mul(&minus_nil).expect("square");
            if power.is_zero() {
                return Ok(acc);
            }
            acc = acc.checked_add(&power).expect("square");
        }
        Err(Error::NotUnipotent(
            "off-diagonal part is not nilpotent".into(),
        ))
    }

    /// General exact inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.to_dense();
        let mut inv: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut row = vec![F::zero(); n];
                row[i] = F::one();
                row
            })
            .collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return None;
            };
            a.swap(col, p);
            inv.swap(col, p);
            let piv = a[col][col].inv();
            for c in 0..n {
                a[col][c] = a[col][c].clone() * piv.clone();
                inv[col][c] = inv[col][c].clone() * piv.clone();
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..n {
                        a[r][c] = a[r][c].clone() - f.clone() * a[col][c].clone();
                        inv[r][c] = inv[r][c].clone() - f.clone() * inv[col][c].clone();
                    }
                }
            }
        }
        let mut m = Self::zero(n, n);
        for (r, row) in inv.into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Some(m)
    }

    /// Largest 1-based (row, col) carrying a nonzero entry, if any.
    pub fn support_bounds1(&self) -> Option<(usize, usize)> {
        let mut max_r = 0;
        let mut max_c = 0;
        if self.entries.is_empty() {
            return None;
        }
        for &(r, c) in self.entries.keys() {
            max_r = max_r.max(r + 1);
            max_c = max_c.max(c + 1);
        }
        Some((max_r, max_c))
    }

    /// Smallest 1-based (row, col) over the support, if any.
    pub fn support_min1(&self) -> Option<(usize, usize)> {
        if self.entries.is_empty() {
            return None;
        }
        let mut min_r = usize::MAX;
        let mut min_c = usize::MAX;
        for &(r, c) in self.entries.keys() {
            min_r = min_r.min(r + 1);
            min_c = min_c.min(c + 1);
        }
        Some((min_r, min_c))
    }
}

impl<F: Field> fmt::Debug for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(12) {
            let row: Vec<String> = (0..self.cols.min(12))
                .map(|c| format!("{:?}", self.get(r, c)))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Add for &ExactMatrix<F> {
    type Output = ExactMatrix<F>;
    fn add(self, rhs: Self) -> ExactMatrix<F> {
        self.checked_add(rhs).expect("shape mismatch in add")
    }
}

impl<F: Field> Sub for &ExactMatrix<F> {
    type Output = ExactMatrix<F>;
    fn sub(self, rhs: Self) -> ExactMatrix<F> {
        self.checked_sub(rhs).expect("shape mismatch in sub")
    }
}

impl<F: Field> Mul for &ExactMatrix<F> {
    type Output = ExactMatrix<F>;
    fn mul(self, rhs: Self) -> ExactMatrix<F> {
        self.checked_mul(rhs).expect("shape mismatch in mul")
    }
}

/// The n×n lower shift Σ e_{j+1,j}: basis vector j ↦ j+1.
pub fn lower_shift(n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zero(n, n);
    for j in 0..n.saturating_sub(1) {
        m.set(j + 1, j, Q::one());
    }
    m
}
