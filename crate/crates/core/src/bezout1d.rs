//! Univariate Bezout matrices, companion matrices and Barnett's formula.

use alloc::vec;
use alloc::vec::Vec;

use crate::bezmat::BezoutFamily;
use crate::linalg::{eigenvalues, CMatrix, Lu, ONE, ZERO};
use crate::poly::{Monomial, MultiPoly};
use crate::reduce::{reduce_family, RankTol, ReduceOptions};
use crate::{Error, Result, C64};

/// Dense univariate polynomial, coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<C64>,
}

impl UniPoly {
    /// From `c_0 + c_1 x + ...`; trailing zeros are dropped.
    pub fn from_ascending(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// From real coefficients, leading one first: `[1, -3, 2]` is `x^2 - 3x + 2`.
    pub fn from_real_desc(c: &[f64]) -> Self {
        Self::from_ascending(c.iter().rev().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![ZERO; k + 1];
        c[k] = ONE;
        UniPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return UniPoly { coeffs: Vec::new() };
        }
        let mut c = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_ascending(c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(ZERO)
                    + other.coeffs.get(k).copied().unwrap_or(ZERO)
            })
            .collect();
        Self::from_ascending(c)
    }

    /// Remainder of division by `f`.
    pub fn rem(&self, f: &UniPoly) -> Result<UniPoly> {
        let d = f.degree().ok_or(Error::DegenerateLeadingCoefficient)?;
        let lead = f.coeffs[d];
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let k = r.len() - 1;
            let q = r[k] / lead;
            for j in 0..=d {
                r[k - d + j] -= q * f.coeffs[j];
            }
            r.pop();
        }
        Ok(Self::from_ascending(r))
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (Monomial(vec![k as u32]), *c));
        MultiPoly::from_terms(1, terms).expect("one variable")
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, x: &CMatrix) -> CMatrix {
        let n = x.rows();
        let mut acc = CMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.matmul(x).add(&CMatrix::identity(n).scale(*c));
        }
        acc
    }
}

fn check_leading(f: &UniPoly) -> Result<usize> {
    match f.degree() {
        Some(d) if d >= 1 => Ok(d),
        _ => Err(Error::DegenerateLeadingCoefficient),
    }
}

/// Frobenius companion matrix: ones on the subdiagonal and
/// `-c_i / c_d` in the last column.
pub fn companion(f: &UniPoly) -> Result<CMatrix> {
    let d = check_leading(f)?;
    let c = f.coeffs();
    let mut m = CMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = ONE;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / c[d];
    }
    Ok(m)
}

/// Coefficients of `(f(x) g(y) - f(y) g(x)) / (x - y)` in the monomials
/// `x^alpha y^beta`, `alpha, beta < m`.
pub fn bezout_matrix_1d(f: &UniPoly, g: &UniPoly, m: usize) -> Result<CMatrix> {
    let need = f.degree().unwrap_or(0).max(g.degree().unwrap_or(0));
    if m < need {
        return Err(Error::SizeTooSmall { m, needed: need });
    }
    let mut b = CMatrix::zeros(m, m);
    for (a, fa) in f.coeffs().iter().enumerate() {
        for (bb, gb) in g.coeffs().iter().enumerate() {
            let c = fa * gb;
            if c == ZERO || a == bb {
                continue;
            }
            // (x^a y^b - x^b y^a) / (x - y) for a > b, antisymmetric otherwise.
            let (hi, lo, s) = if a > bb { (a, bb, c) } else { (bb, a, -c) };
            for t in 0..hi - lo {
                b[(lo + t, hi - 1 - t)] += s;
            }
        }
    }
    Ok(b)
}

/// `B(x) B(1)^{-1}`, which is the companion matrix of `f`.
pub fn barnett(f: &UniPoly) -> Result<CMatrix> {
    let d = check_leading(f)?;
    let b1 = bezout_matrix_1d(f, &UniPoly::monomial(0), d)?;
    let bx = bezout_matrix_1d(f, &UniPoly::monomial(1), d)?;
    right_divide(&bx, &b1)
}

/// `A B^{-1}` through an LU solve with the transposes.
pub(crate) fn right_divide(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let lu = Lu::new(&b.transpose());
    if lu.pivot_ratio() == 0.0 {
        return Err(Error::Singular);
    }
    Ok(lu.solve(&a.transpose())?.transpose())
}

/// Matrix of multiplication by `g` in `C[x]/(f)` on the basis
/// `1, x, ..., x^{d-1}`, obtained from Bezout matrices.
///
/// When `deg g > d` the pair `B(1), B(g)` is first reduced to size `d`; the
/// result is then mapped back from the reduced label basis.
pub fn generalized_barnett(f: &UniPoly, g: &UniPoly) -> Result<CMatrix> {
    let d = check_leading(f)?;
    let m = d.max(g.degree().unwrap_or(0));
    let b1 = bezout_matrix_1d(f, &UniPoly::monomial(0), m)?;
    let bg = bezout_matrix_1d(f, g, m)?;
    if m == d {
        return right_divide(&bg, &b1);
    }
    let labels: Vec<MultiPoly> = (0..m)
        .map(|k| UniPoly::monomial(k).to_multipoly())
        .collect();
    let fam = BezoutFamily {
        matrices: vec![b1.clone(), bg],
        row_labels: labels.clone(),
        col_labels: labels,
    };
    let opts = ReduceOptions {
        tolerance: RankTol::Absolute(1e-10 * b1.max_abs()),
        ..Default::default()
    };
    let red = reduce_family(&fam, &opts)?;
    if red.dim() != d {
        return Err(Error::NonZeroDimensional(alloc::format!(
            "reduced to size {} instead of {}",
            red.dim(),
            d
        )));
    }
    let mp = right_divide(red.family.bx(0), red.family.b1())?;
    // Reduced labels are x . T with T taken modulo f.
    let mut t = CMatrix::zeros(d, d);
    for (j, lab) in red.family.row_labels.iter().enumerate() {
        let mut c = vec![ZERO; m];
        for (mono, coef) in lab.terms() {
            c[mono.exps()[0] as usize] = *coef;
        }
        let r = UniPoly::from_ascending(c).rem(f)?;
        for (i, ci) in r.coeffs().iter().enumerate() {
            t[(i, j)] = *ci;
        }
    }
    right_divide(&t.matmul(&mp), &t)
}

/// `x . B(1)`: the Horner basis of `C[x]/(f)`.
pub fn horner_basis(f: &UniPoly) -> Result<Vec<UniPoly>> {
    let d = check_leading(f)?;
    let b1 = bezout_matrix_1d(f, &UniPoly::monomial(0), d)?;
    Ok((0..d).map(|k| UniPoly::from_ascending(b1.col(k))).collect())
}

/// Eigenvalues of the companion matrix.
pub fn roots_1d(f: &UniPoly) -> Result<Vec<C64>> {
    eigenvalues(&companion(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> UniPoly {
        UniPoly::from_real_desc(&[1.0, -3.0, 2.0])
    }

    fn close(a: &CMatrix, rows: &[[f64; 2]], tol: f64) -> bool {
        a.sub(&CMatrix::from_real_rows(rows)).max_abs() < tol
    }

    #[test]
    fn companion_examples() {
        assert!(close(
            &companion(&quad()).unwrap(),
            &[[0.0, -2.0], [1.0, 3.0]],
            1e-15
        ));
        let c = companion(&UniPoly::from_real_desc(&[1.0, 0.0])).unwrap();
        assert_eq!(c, CMatrix::zeros(1, 1));
        assert!(companion(&UniPoly::from_real_desc(&[3.0])).is_err());
    }

    #[test]
    fn bezout_matrices_of_quadratic() {
        let f = quad();
        let b1 = bezout_matrix_1d(&f, &UniPoly::monomial(0), 3).unwrap();
        let want = CMatrix::from_real_rows(&[[-3.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        assert_eq!(b1, want);
        let b3 = bezout_matrix_1d(&f, &UniPoly::monomial(3), 3).unwrap();
        let want =
            CMatrix::from_real_rows(&[[0.0, 0.0, -2.0], [0.0, -2.0, 3.0], [-2.0, 3.0, -1.0]]);
        assert_eq!(b3, want);
        assert_eq!(bezout_matrix_1d(&f, &f, 4).unwrap(), CMatrix::zeros(4, 4));
        assert!(bezout_matrix_1d(&f, &UniPoly::monomial(3), 2).is_err());
        // xy - 2
        let bx = bezout_matrix_1d(&f, &UniPoly::monomial(1), 2).unwrap();
        assert!(close(&bx, &[[-2.0, 0.0], [0.0, 1.0]], 1e-15));
    }

    #[test]
    fn barnett_and_powers() {
        let f = quad();
        let x = barnett(&f).unwrap();
        assert!(close(&x, &[[0.0, -2.0], [1.0, 3.0]], 1e-12));
        let x2 = generalized_barnett(&f, &UniPoly::monomial(2)).unwrap();
        assert!(x2.sub(&x.matmul(&x)).max_abs() < 1e-12);
        let x3 = generalized_barnett(&f, &UniPoly::monomial(3)).unwrap();
        assert!(close(&x3, &[[-6.0, -14.0], [7.0, 15.0]], 1e-10));
        let one = generalized_barnett(&f, &UniPoly::monomial(0)).unwrap();
        assert!(one.sub(&CMatrix::identity(2)).max_abs() < 1e-12);
        let rot = barnett(&UniPoly::from_real_desc(&[1.0, 0.0, 1.0])).unwrap();
        assert!(close(&rot, &[[0.0, -1.0], [1.0, 0.0]], 1e-12));
    }

    #[test]
    fn reduction_relation_is_multiple_of_f() {
        let f = quad();
        let m = 3;
        let labels: Vec<MultiPoly> = (0..m)
            .map(|k| UniPoly::monomial(k).to_multipoly())
            .collect();
        let fam = BezoutFamily {
            matrices: vec![
                bezout_matrix_1d(&f, &UniPoly::monomial(0), m).unwrap(),
                bezout_matrix_1d(&f, &UniPoly::monomial(3), m).unwrap(),
            ],
            row_labels: labels.clone(),
            col_labels: labels,
        };
        let red = reduce_family(&fam, &ReduceOptions::default()).unwrap();
        assert_eq!(red.dim(), 2);
        assert_eq!(red.relations.len(), 1);
        let rel = &red.relations[0];
        let fp = f.to_multipoly();
        let mono2 = Monomial(vec![2]);
        let s = rel.coeff(&mono2) / fp.coeff(&mono2);
        assert!(rel.max_diff(&fp.scale(s)) < 1e-12 * s.norm());
    }

    #[test]
    fn horner_and_roots() {
        let h = horner_basis(&quad()).unwrap();
        assert_eq!(h[0], UniPoly::from_real_desc(&[1.0, -3.0]));
        assert_eq!(h[1], UniPoly::from_real_desc(&[1.0]));
        let mut r = roots_1d(&quad()).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - ONE).norm() < 1e-12 && (r[1] - C64::new(2.0, 0.0)).norm() < 1e-12);
        let z = roots_1d(&UniPoly::from_real_desc(&[1.0, 0.0, 0.0])).unwrap();
        assert!(z.iter().all(|x| x.norm() < 1e-8));
    }
}
