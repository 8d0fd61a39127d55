//! Dense complex linear algebra used by the solver.
//!
//! Everything is column-agnostic row-major storage with straightforward
//! loops; the largest matrices handled are a few hundred wide.

mod eigen;
mod householder;
mod lu;
mod qr;

pub use eigen::{eigen, eigenvalues, Eigen};
pub use householder::Reflector;
pub(crate) use lu::det_small;
pub use lu::Lu;
pub use qr::{null_vector, ColPivQr};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::C64;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of real numbers.
    ///
    /// # Panics
    /// If the rows have different lengths.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| C64::new(x, 0.0)));
        }
        CMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix from row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        CMatrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: C64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn norm_fro(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn col_norm(&self, j: usize) -> f64 {
        libm::sqrt((0..self.rows).map(|i| self[(i, j)].norm_sqr()).sum())
    }

    pub fn col_max_abs(&self, j: usize) -> f64 {
        (0..self.rows).fold(0.0, |m, i| m.max(self[(i, j)].norm()))
    }

    pub fn row_max_abs(&self, i: usize) -> f64 {
        self.row(i).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn remove_row(&mut self, r: usize) {
        assert!(r < self.rows);
        self.data.drain(r * self.cols..(r + 1) * self.cols);
        self.rows -= 1;
    }

    pub fn remove_col(&mut self, c: usize) {
        assert!(c < self.cols);
        let cols = self.cols;
        let mut k = 0;
        self.data.retain(|_| {
            let keep = k % cols != c;
            k += 1;
            keep
        });
        self.cols -= 1;
    }

    /// Submatrix with the given rows and columns, in that order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn columns(&self, cols: core::ops::Range<usize>) -> Self {
        let idx: Vec<usize> = cols.collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, &idx)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(mats: &[&CMatrix]) -> Self {
        let cols = mats.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for m in mats {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        CMatrix { rows, cols, data }
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(mats: &[&CMatrix]) -> Self {
        let rows = mats.first().map_or(0, |m| m.rows);
        let cols: usize = mats.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for m in mats {
            assert_eq!(m.rows, rows);
            for i in 0..rows {
                out.row_mut(i)[off..off + m.cols].copy_from_slice(m.row(i));
            }
            off += m.cols;
        }
        out
    }

    /// Rotates columns `from..` left by `by` in every row.
    pub fn rotate_cols_left(&mut self, from: usize, by: usize) {
        for i in 0..self.rows {
            self.data[i * self.cols + from..(i + 1) * self.cols].rotate_left(by);
        }
    }

    /// Largest Euclidean column norm.
    pub fn max_col_norm(&self) -> f64 {
        (0..self.cols).map(|j| self.col_norm(j)).fold(0.0, f64::max)
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Index of the entry with largest modulus (first one on ties).
pub fn argmax_abs(v: &[C64]) -> usize {
    let mut best = 0;
    let mut bv = -1.0;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > bv {
            bv = a;
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remove_and_select() {
        let mut m = CMatrix::from_real_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]);
        m.remove_col(1);
        assert_eq!(m, CMatrix::from_real_rows(&[[1.0, 3.0], [4.0, 6.0]]));
        m.remove_row(0);
        assert_eq!(m, CMatrix::from_real_rows(&[[4.0, 6.0]]));
    }

    #[test]
    fn stacking() {
        let a = CMatrix::from_real_rows(&[[1.0, 2.0]]);
        let b = CMatrix::from_real_rows(&[[3.0, 4.0]]);
        assert_eq!(
            CMatrix::vstack(&[&a, &b]),
            CMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]])
        );
        assert_eq!(
            CMatrix::hstack(&[&a, &b]),
            CMatrix::from_real_rows(&[[1.0, 2.0, 3.0, 4.0]])
        );
    }

    #[test]
    fn matmul_small() {
        let a = CMatrix::from_real_rows(&[[0.0, -2.0], [1.0, 3.0]]);
        let a2 = a.matmul(&a);
        assert_eq!(a2, CMatrix::from_real_rows(&[[-2.0, -6.0], [3.0, 7.0]]));
    }
}
