use alloc::vec;
use alloc::vec::Vec;

use super::{vec_norm, CMatrix, Reflector, ZERO};
use crate::{Error, Result, C64};

/// Eigenvalues and unit eigenvectors (as columns) of a complex matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

/// Complex Schur form `A = Z T Z*` by Hessenberg reduction and shifted QR.
fn schur(a: &CMatrix, want_z: bool) -> Result<(CMatrix, CMatrix)> {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    let mut z = if want_z {
        CMatrix::identity(n)
    } else {
        CMatrix::zeros(0, 0)
    };

    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let (r, beta) = Reflector::annihilate(&x, 0, k + 1);
        r.apply_left(&mut h, k);
        r.apply_right(&mut h);
        h[(k + 1, k)] = beta;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
        if want_z {
            r.apply_right(&mut z);
        }
    }

    let eps = f64::EPSILON;
    let anorm = h.max_abs().max(f64::MIN_POSITIVE);
    let max_iter = 40 * n.max(1);
    let mut hi = n.saturating_sub(1);
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = anorm;
            }
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_iter * 10 || iter > max_iter {
            return Err(Error::NoConvergence);
        }
        let mu = if iter % 11 == 0 {
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - mu, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let c0 = if k == l { l } else { k - 1 };
            for j in c0..n {
                let (a1, a2) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = a1 * c + s * a2;
                h[(k + 1, j)] = -s.conj() * a1 + a2 * c;
            }
            if k > l {
                h[(k + 1, k - 1)] = ZERO;
            }
            let rmax = (k + 2).min(hi);
            for i in 0..=rmax {
                let (p, q) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = p * c + q * s.conj();
                h[(i, k + 1)] = -p * s + q * c;
            }
            if want_z {
                for i in 0..n {
                    let (p, q) = (z[(i, k)], z[(i, k + 1)]);
                    z[(i, k)] = p * c + q * s.conj();
                    z[(i, k + 1)] = -p * s + q * c;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok((h, z))
}

/// Rotation `[c s; -conj(s) c]` sending `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let (ax, ay) = (x.norm(), y.norm());
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = libm::hypot(ax, ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m = (a + d) * 0.5;
    let (l1, l2) = (m + disc, m - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let (t, _) = schur(a, false)?;
    Ok((0..a.rows()).map(|i| t[(i, i)]).collect())
}

/// Full eigendecomposition. Eigenvectors come from back substitution on the
/// Schur factor and are normalised to unit length.
pub fn eigen(a: &CMatrix) -> Result<Eigen> {
    let n = a.rows();
    let (t, z) = schur(a, true)?;
    let tnorm = t.max_abs().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;
    let mut vectors = CMatrix::zeros(n, n);
    let mut x = vec![ZERO; n];
    for k in 0..n {
        for v in x.iter_mut() {
            *v = ZERO;
        }
        x[k] = C64::new(1.0, 0.0);
        let lk = t[(k, k)];
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in i + 1..=k {
                s += t[(i, j)] * x[j];
            }
            let mut d = t[(i, i)] - lk;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            x[i] = -s / d;
            let big = x[i].norm();
            if big > 1e100 {
                for v in x[..=k].iter_mut() {
                    *v /= big;
                }
            }
        }
        let mut v = vec![ZERO; n];
        for i in 0..n {
            let mut s = ZERO;
            for j in 0..=k {
                s += z[(i, j)] * x[j];
            }
            v[i] = s;
        }
        let nv = vec_norm(&v);
        for i in 0..n {
            vectors[(i, k)] = v[i] / nv;
        }
    }
    Ok(Eigen {
        values: (0..n).map(|i| t[(i, i)]).collect(),
        vectors,
    })
}
