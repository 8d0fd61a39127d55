use alloc::vec::Vec;

use super::{CMatrix, ONE, ZERO};
use crate::{Error, Result, C64};

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Self {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = lu[(k, k)];
            if piv == ZERO {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Lu { lu, perm, sign }
    }

    pub fn det(&self) -> C64 {
        let n = self.lu.rows();
        (0..n).fold(C64::new(self.sign, 0.0), |d, i| d * self.lu[(i, i)])
    }

    /// Ratio of the smallest to the largest pivot modulus; a cheap
    /// conditioning indicator.
    pub fn pivot_ratio(&self) -> f64 {
        let n = self.lu.rows();
        if n == 0 {
            return 1.0;
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let v = self.lu[(i, i)].norm();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }

    pub fn solve_vec(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            let d = self.lu[(i, i)];
            if d == ZERO {
                return Err(Error::Singular);
            }
            x[i] = s / d;
        }
        Ok(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix> {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n);
        let mut out = CMatrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.col(j))?;
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        Ok(out)
    }
}

/// Determinant of a small dense matrix given as rows.
pub(crate) fn det_small(a: &mut [C64], n: usize) -> C64 {
    let mut det = ONE;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm();
        for i in k + 1..n {
            let v = a[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return ZERO;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        det *= piv;
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            for j in k + 1..n {
                let u = a[k * n + j];
                a[i * n + j] -= f * u;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_solve() {
        let a = CMatrix::from_real_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]]);
        let lu = Lu::new(&a);
        assert!((lu.det() - C64::new(18.0, 0.0)).norm() < 1e-12);
        let b = CMatrix::from_real_rows(&[[1.0], [2.0], [3.0]]);
        let x = lu.solve(&b).unwrap();
        assert!(a.matmul(&x).sub(&b).max_abs() < 1e-12);
        let mut raw: Vec<C64> = a.as_slice().to_vec();
        assert!((det_small(&mut raw, 3) - C64::new(18.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn singular_is_reported() {
        let a = CMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        let lu = Lu::new(&a);
        assert!(lu.det().norm() < 1e-15);
        assert!(lu.solve_vec(&[ONE, ONE]).is_err());
    }
}
