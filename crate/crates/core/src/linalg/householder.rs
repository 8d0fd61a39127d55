use alloc::vec::Vec;

use super::{vec_norm, CMatrix, ZERO};
use crate::C64;

/// Householder reflector `H = I - 2 w w*` acting on indices
/// `offset..offset + w.len()`, with `|w| = 1` (or `w = 0` for the identity).
///
/// `H` is Hermitian and unitary, so it is its own inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Reflector {
    pub offset: usize,
    pub w: Vec<C64>,
}

impl Reflector {
    /// Reflector mapping `x` onto `beta * e_target`; returns `(H, beta)`.
    ///
    /// `beta = -phase(x[target]) * |x|`, which keeps the construction free of
    /// cancellation.
    pub fn annihilate(x: &[C64], target: usize, offset: usize) -> (Reflector, C64) {
        let nrm = vec_norm(x);
        if nrm == 0.0 {
            return (
                Reflector {
                    offset,
                    w: Vec::from(x),
                },
                ZERO,
            );
        }
        let xt = x[target];
        let ph = if xt.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            xt / xt.norm()
        };
        let beta = -ph * nrm;
        let mut w: Vec<C64> = Vec::from(x);
        w[target] -= beta;
        let wn = vec_norm(&w);
        for z in &mut w {
            *z /= wn;
        }
        (Reflector { offset, w }, beta)
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    fn is_identity(&self) -> bool {
        self.w.iter().all(|z| *z == ZERO)
    }

    /// `A <- H A`, restricted to columns `col_from..`.
    pub fn apply_left(&self, a: &mut CMatrix, col_from: usize) {
        if self.is_identity() {
            return;
        }
        let (o, n) = (self.offset, a.cols());
        let mut s = alloc::vec![ZERO; n];
        for (k, wk) in self.w.iter().enumerate() {
            let wc = wk.conj();
            let row = a.row(o + k);
            for j in col_from..n {
                s[j] += wc * row[j];
            }
        }
        for (k, wk) in self.w.iter().enumerate() {
            let f = wk * 2.0;
            let row = a.row_mut(o + k);
            for j in col_from..n {
                row[j] -= f * s[j];
            }
        }
    }

    /// `A <- A H`, restricted to rows `row_from..row_to`.
    pub fn apply_right_rows(&self, a: &mut CMatrix, row_from: usize, row_to: usize) {
        if self.is_identity() {
            return;
        }
        let o = self.offset;
        for i in row_from..row_to {
            let row = a.row_mut(i);
            let mut s = ZERO;
            for (k, wk) in self.w.iter().enumerate() {
                s += row[o + k] * wk;
            }
            let s2 = s * 2.0;
            for (k, wk) in self.w.iter().enumerate() {
                row[o + k] -= s2 * wk.conj();
            }
        }
    }

    /// `A <- A H`.
    pub fn apply_right(&self, a: &mut CMatrix) {
        self.apply_right_rows(a, 0, a.rows());
    }

    /// `A <- A conj(H)`; this is the update a column label basis sees when the
    /// matrices are multiplied by `H` on the right.
    pub fn apply_right_conj(&self, a: &mut CMatrix) {
        let c = Reflector {
            offset: self.offset,
            w: self.w.iter().map(|z| z.conj()).collect(),
        };
        c.apply_right(a);
    }

    pub fn apply_vec(&self, v: &mut [C64]) {
        let o = self.offset;
        let s: C64 = self
            .w
            .iter()
            .enumerate()
            .map(|(k, w)| w.conj() * v[o + k])
            .sum();
        for (k, w) in self.w.iter().enumerate() {
            v[o + k] -= w * s * 2.0;
        }
    }

    /// Dense `n x n` representation.
    pub fn to_matrix(&self, n: usize) -> CMatrix {
        let mut m = CMatrix::identity(n);
        self.apply_left(&mut m, 0);
        m
    }
}
