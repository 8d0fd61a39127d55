//! Bezout matrices of a square system by evaluation and Fourier
//! interpolation.
//!
//! For a system `f_1..f_n` with multidegree `d` the Bezout polynomial of a
//! multiplier `g` is `delta(g) = det Delta(g)` with
//! `Delta_ij(g) = (g(y) f_i(y_<j, x_>=j) - g(x) f_i(y_<=j, x_>j)) / (x_j - y_j)`
//! for monomial `g` split across the columns. Its coefficient matrix `B(g)`,
//! indexed by `x`-monomials (rows) and `y`-monomials (columns), is what the
//! rest of the solver works with. Only `g = 1` and `g = x_k` are needed.
//!
//! Degree bounds: `deg_{x_j} delta <= (j+1) d_j - 1` and
//! `deg_{y_j} delta <= (n-j) d_j - 1` (0-based `j`). The evaluation grid is a
//! product of roots of unity of those orders for `x`, and of rotated roots of
//! unity for `y` so that no `x_j` node meets a `y_j` node.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::{CMatrix, ZERO};
use crate::poly::{divided_difference, Monomial, MultiPoly, PolySystem};
use crate::{Error, Result, C64};

/// Relative magnitude below which a whole row or column of the family is
/// treated as zero and dropped.
pub const PRUNE_TOL: f64 = 1e-8;

/// Entries below `NOISE_FACTOR * D * eps * max` after interpolation are
/// roundoff and are set to exact zero.
pub const NOISE_FACTOR: f64 = 4.0;

/// Tensor grid of interpolation nodes and the matching monomial boxes.
#[derive(Clone, Debug)]
pub struct FourierGrid {
    xrad: Vec<usize>,
    yrad: Vec<usize>,
    size: usize,
}

impl FourierGrid {
    pub fn new(multidegree: &[u32]) -> Result<Self> {
        let n = multidegree.len();
        if n == 0 || multidegree.contains(&0) {
            return Err(Error::Invalid(
                "multidegree entries must be positive".into(),
            ));
        }
        let xrad: Vec<usize> = (0..n).map(|j| (j + 1) * multidegree[j] as usize).collect();
        let yrad: Vec<usize> = (0..n).map(|j| (n - j) * multidegree[j] as usize).collect();
        let size: usize = xrad.iter().product();
        let grid = FourierGrid { xrad, yrad, size };
        for j in 0..n {
            let u = grid.u_nodes(j);
            let v = grid.v_nodes(j);
            for a in &u {
                for b in &v {
                    if (a - b).norm() < 1e-12 {
                        return Err(Error::GridCollision(j));
                    }
                }
            }
        }
        Ok(grid)
    }

    pub fn nvars(&self) -> usize {
        self.xrad.len()
    }

    /// Number of nodes on each side, `prod (j+1) d_j`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Extent of the `x`-exponent box in each variable.
    pub fn x_radices(&self) -> &[usize] {
        &self.xrad
    }

    pub fn y_radices(&self) -> &[usize] {
        &self.yrad
    }

    /// Nodes for `x_j`: the roots of `X^{(j+1) d_j} = 1`.
    pub fn u_nodes(&self, j: usize) -> Vec<C64> {
        let m = self.xrad[j];
        (0..m)
            .map(|l| unit(2.0 * PI * l as f64 / m as f64))
            .collect()
    }

    /// Nodes for `y_j`: the roots of `X^{(n-j) d_j} = exp(i pi / (j+1))`.
    pub fn v_nodes(&self, j: usize) -> Vec<C64> {
        let m = self.yrad[j];
        (0..m)
            .map(|l| unit(self.v_angle(j, 1) + 2.0 * PI * l as f64 / m as f64))
            .collect()
    }

    fn v_angle(&self, j: usize, e: usize) -> f64 {
        PI * e as f64 / ((j + 1) * self.yrad[j]) as f64
    }

    /// Mixed-radix digits of `idx`, first variable most significant.
    fn digits(rad: &[usize], mut idx: usize) -> Vec<usize> {
        let mut d = vec![0; rad.len()];
        for j in (0..rad.len()).rev() {
            d[j] = idx % rad[j];
            idx /= rad[j];
        }
        d
    }

    fn index(rad: &[usize], e: &[u32]) -> Option<usize> {
        let mut idx = 0;
        for (j, &r) in rad.iter().enumerate() {
            let ej = e[j] as usize;
            if ej >= r {
                return None;
            }
            idx = idx * r + ej;
        }
        Some(idx)
    }

    /// Exponents of the `x`-monomial labelling row `idx`.
    pub fn x_exponent(&self, idx: usize) -> Vec<u32> {
        Self::digits(&self.xrad, idx)
            .into_iter()
            .map(|d| d as u32)
            .collect()
    }

    pub fn y_exponent(&self, idx: usize) -> Vec<u32> {
        Self::digits(&self.yrad, idx)
            .into_iter()
            .map(|d| d as u32)
            .collect()
    }

    pub fn x_index(&self, e: &[u32]) -> Option<usize> {
        Self::index(&self.xrad, e)
    }

    pub fn y_index(&self, e: &[u32]) -> Option<usize> {
        Self::index(&self.yrad, e)
    }

    pub fn u_point(&self, idx: usize) -> Vec<C64> {
        Self::digits(&self.xrad, idx)
            .iter()
            .zip(&self.xrad)
            .map(|(&l, &m)| unit(2.0 * PI * l as f64 / m as f64))
            .collect()
    }

    pub fn v_point(&self, idx: usize) -> Vec<C64> {
        Self::digits(&self.yrad, idx)
            .iter()
            .enumerate()
            .map(|(j, &l)| unit(self.v_angle(j, 1) + 2.0 * PI * l as f64 / self.yrad[j] as f64))
            .collect()
    }

    /// `F_u[a, alpha] = u_a^alpha` (not normalised).
    pub fn fu(&self) -> CMatrix {
        let pts: Vec<Vec<usize>> = (0..self.size)
            .map(|i| Self::digits(&self.xrad, i))
            .collect();
        CMatrix::from_fn(self.size, self.size, |a, al| {
            let mut ang = 0.0;
            for j in 0..self.nvars() {
                let m = self.xrad[j];
                ang += ((pts[a][j] * pts[al][j]) % m) as f64 / m as f64;
            }
            unit(2.0 * PI * ang)
        })
    }

    /// `F_v[b, beta] = v_b^beta` (not normalised).
    pub fn fv(&self) -> CMatrix {
        let pts: Vec<Vec<usize>> = (0..self.size)
            .map(|i| Self::digits(&self.yrad, i))
            .collect();
        CMatrix::from_fn(self.size, self.size, |b, be| {
            let mut ang = 0.0;
            for j in 0..self.nvars() {
                let m = self.yrad[j];
                ang += 2.0 * PI * ((pts[b][j] * pts[be][j]) % m) as f64 / m as f64;
                ang += self.v_angle(j, pts[be][j]);
            }
            unit(ang)
        })
    }
}

fn unit(theta: f64) -> C64 {
    C64::new(libm::cos(theta), libm::sin(theta))
}

/// A list of points in `C^n`.
pub type Points = Vec<Vec<C64>>;

/// The node sets `U` and `V` as explicit points.
pub fn fourier_points(multidegree: &[u32]) -> Result<(Points, Points)> {
    let g = FourierGrid::new(multidegree)?;
    let u = (0..g.size()).map(|i| g.u_point(i)).collect();
    let v = (0..g.size()).map(|i| g.v_point(i)).collect();
    Ok((u, v))
}

/// Values of `delta(1), delta(x_1), ..., delta(x_n)` at `(x, y) = (u, v)`.
///
/// Fails with [`Error::GridCollision`] if some `u_j == v_j`.
pub fn bezout_values(sys: &PolySystem, u: &[C64], v: &[C64]) -> Result<Vec<C64>> {
    let n = sys.nvars();
    if u.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.len().min(v.len()),
        });
    }
    // fv[i][j] = f_i(v_<j, u_>=j), j = 0..=n.
    let mut p = u.to_vec();
    let mut fv = vec![vec![ZERO; n + 1]; n];
    for j in 0..=n {
        if j > 0 {
            p[j - 1] = v[j - 1];
        }
        for (i, f) in sys.polys().iter().enumerate() {
            fv[i][j] = f.eval(&p);
        }
    }
    let mut base = vec![ZERO; n * n];
    let mut inv = vec![ZERO; n];
    for j in 0..n {
        let d = u[j] - v[j];
        if d.norm() < 1e-14 {
            return Err(Error::GridCollision(j));
        }
        inv[j] = d.inv();
        for i in 0..n {
            base[i * n + j] = (fv[i][j] - fv[i][j + 1]) * inv[j];
        }
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut m = base.clone();
    out.push(crate::linalg::det_small(&mut m, n));
    for k in 0..n {
        let mut m = base.clone();
        for i in 0..n {
            m[i * n + k] = (v[k] * fv[i][k] - u[k] * fv[i][k + 1]) * inv[k];
        }
        out.push(crate::linalg::det_small(&mut m, n));
    }
    Ok(out)
}

/// Numerical `Delta(1)` at a point pair.
pub fn delta_matrix_at(sys: &PolySystem, u: &[C64], v: &[C64]) -> Result<CMatrix> {
    let n = sys.nvars();
    let mut p = u.to_vec();
    let mut prev: Vec<C64> = sys.eval(&p);
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        p[j] = v[j];
        let next = sys.eval(&p);
        let d = u[j] - v[j];
        if d.norm() < 1e-14 {
            return Err(Error::GridCollision(j));
        }
        for i in 0..n {
            m[(i, j)] = (prev[i] - next[i]) / d;
        }
        prev = next;
    }
    Ok(m)
}

/// Evaluation matrices `C_k[a, b] = delta(g_k)(u_a, v_b)` for
/// `g_0 = 1, g_k = x_k`.
pub fn evaluation_matrices(sys: &PolySystem, grid: &FourierGrid) -> Result<Vec<CMatrix>> {
    let n = sys.nvars();
    let d = grid.size();
    let us: Vec<Vec<C64>> = (0..d).map(|i| grid.u_point(i)).collect();
    let vs: Vec<Vec<C64>> = (0..d).map(|i| grid.v_point(i)).collect();
    let mut out = vec![CMatrix::zeros(d, d); n + 1];
    for (a, u) in us.iter().enumerate() {
        for (b, v) in vs.iter().enumerate() {
            let vals = bezout_values(sys, u, v)?;
            for (k, val) in vals.into_iter().enumerate() {
                out[k][(a, b)] = val;
            }
        }
    }
    Ok(out)
}

/// Evaluation matrix for `delta(1)` (`k = 0`) or `delta(x_k)`.
pub fn evaluation_matrix(sys: &PolySystem, grid: &FourierGrid, k: usize) -> Result<CMatrix> {
    if k > sys.nvars() {
        return Err(Error::VariableOutOfRange {
            index: k,
            nvars: sys.nvars(),
        });
    }
    Ok(evaluation_matrices(sys, grid)?.swap_remove(k))
}

/// Coefficients from grid values: `B = F_u* C conj(F_v) / D^2`, the inverse
/// of `C = F_u B F_v^T`.
pub fn interpolate(grid: &FourierGrid, c: &CMatrix) -> CMatrix {
    let d = grid.size() as f64;
    grid.fu()
        .adjoint()
        .matmul(c)
        .matmul(&grid.fv().conj())
        .scale(C64::new(1.0 / (d * d), 0.0))
}

/// `B(1), B(x_1), ..., B(x_n)` together with the monomials labelling rows
/// (in `x`) and columns (in `y`, stored as polynomials in `n` variables).
#[derive(Clone, Debug, PartialEq)]
pub struct BezoutFamily {
    pub matrices: Vec<CMatrix>,
    pub row_labels: Vec<MultiPoly>,
    pub col_labels: Vec<MultiPoly>,
}

impl BezoutFamily {
    pub fn nvars(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn rows(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.matrices[0].cols()
    }

    /// `B(1)`.
    pub fn b1(&self) -> &CMatrix {
        &self.matrices[0]
    }

    /// `B(x_k)`, 0-based `k`.
    pub fn bx(&self, k: usize) -> &CMatrix {
        &self.matrices[k + 1]
    }

    /// Largest entry over the whole family.
    pub fn max_abs(&self) -> f64 {
        self.matrices.iter().fold(0.0, |m, b| m.max(b.max_abs()))
    }

    /// Drops rows and columns whose entries are at most `tol` times the
    /// family maximum in every matrix.
    pub fn pruned(&self, tol: f64) -> BezoutFamily {
        let cut = tol * self.max_abs();
        let rows: Vec<usize> = (0..self.rows())
            .filter(|&i| self.matrices.iter().any(|b| b.row_max_abs(i) > cut))
            .collect();
        let cols: Vec<usize> = (0..self.cols())
            .filter(|&j| self.matrices.iter().any(|b| b.col_max_abs(j) > cut))
            .collect();
        BezoutFamily {
            matrices: self
                .matrices
                .iter()
                .map(|b| b.select(&rows, &cols))
                .collect(),
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
        }
    }

    /// Evaluates `x_label(xi) . B_k . y_label(eta)^T`.
    pub fn bilinear(&self, k: usize, xi: &[C64], eta: &[C64]) -> C64 {
        let xr: Vec<C64> = self.row_labels.iter().map(|p| p.eval(xi)).collect();
        let yc: Vec<C64> = self.col_labels.iter().map(|p| p.eval(eta)).collect();
        let by = self.matrices[k].matvec(&yc);
        xr.iter().zip(&by).map(|(a, b)| a * b).sum()
    }
}

fn box_labels(grid: &FourierGrid) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
    let one = C64::new(1.0, 0.0);
    let rows = (0..grid.size())
        .map(|i| MultiPoly::monomial(Monomial(grid.x_exponent(i)), one))
        .collect();
    let cols = (0..grid.size())
        .map(|i| MultiPoly::monomial(Monomial(grid.y_exponent(i)), one))
        .collect();
    (rows, cols)
}

/// Unpruned family over the full monomial boxes.
pub fn bezout_family_full(sys: &PolySystem) -> Result<BezoutFamily> {
    let grid = FourierGrid::new(sys.multidegree())?;
    let evals = evaluation_matrices(sys, &grid)?;
    let mut matrices: Vec<CMatrix> = evals.iter().map(|c| interpolate(&grid, c)).collect();
    let scale = matrices.iter().map(CMatrix::max_abs).fold(0.0, f64::max);
    let floor = NOISE_FACTOR * grid.size() as f64 * f64::EPSILON * scale;
    for m in &mut matrices {
        *m = CMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            if m[(i, j)].norm() <= floor {
                ZERO
            } else {
                m[(i, j)]
            }
        });
    }
    let (row_labels, col_labels) = box_labels(&grid);
    Ok(BezoutFamily {
        matrices,
        row_labels,
        col_labels,
    })
}

/// Family with all-zero rows and columns removed (see [`PRUNE_TOL`]).
pub fn build_family(sys: &PolySystem) -> Result<BezoutFamily> {
    Ok(bezout_family_full(sys)?.pruned(PRUNE_TOL))
}

/// Symbolic `Delta(g_k)` over `2n` variables `(x, y)`; `k = 0` is `g = 1`.
pub fn symbolic_delta(sys: &PolySystem, k: usize) -> Result<Vec<Vec<MultiPoly>>> {
    let n = sys.nvars();
    if k > n {
        return Err(Error::VariableOutOfRange { index: k, nvars: n });
    }
    Ok(sys
        .polys()
        .iter()
        .map(|f| {
            (0..n)
                .map(|j| divided_difference(f, j, u32::from(k == j + 1)))
                .collect()
        })
        .collect())
}

fn det_poly(m: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(nvars);
    for c in 0..n {
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let t = &m[0][c] * &det_poly(&minor, nvars);
        acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// Symbolic Bezout polynomial `delta(g_k)` over `(x, y)`.
pub fn symbolic_bezout_poly(sys: &PolySystem, k: usize) -> Result<MultiPoly> {
    if sys.nvars() > 3 {
        return Err(Error::SymbolicTooLarge(
            "symbolic determinants are limited to n <= 3",
        ));
    }
    let delta = symbolic_delta(sys, k)?;
    Ok(det_poly(&delta, 2 * sys.nvars()))
}

/// Same family as [`build_family`], expanded symbolically. Intended as a
/// cross-check on small systems.
pub fn symbolic_family(sys: &PolySystem) -> Result<BezoutFamily> {
    let n = sys.nvars();
    let grid = FourierGrid::new(sys.multidegree())?;
    if n > 3 || grid.size() > 1024 {
        return Err(Error::SymbolicTooLarge(
            "symbolic family needs n <= 3 and at most 1024 box monomials",
        ));
    }
    let d = grid.size();
    let mut matrices = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let p = symbolic_bezout_poly(sys, k)?;
        let mut b = CMatrix::zeros(d, d);
        for (m, c) in p.terms() {
            let (xe, ye) = m.exps().split_at(n);
            match (grid.x_index(xe), grid.y_index(ye)) {
                (Some(i), Some(j)) => b[(i, j)] = *c,
                _ => {
                    return Err(Error::Invalid(
                        "Bezout polynomial leaves the degree box".into(),
                    ))
                }
            }
        }
        matrices.push(b);
    }
    let (row_labels, col_labels) = box_labels(&grid);
    Ok(BezoutFamily {
        matrices,
        row_labels,
        col_labels,
    }
    .pruned(PRUNE_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::default_names;

    fn quad() -> PolySystem {
        PolySystem::parse(&["x1^2 - 3*x1 + 2"], &["x1"]).unwrap()
    }

    #[test]
    fn univariate_grid_nodes() {
        let (u, v) = fourier_points(&[2]).unwrap();
        assert!((u[0][0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((u[1][0] - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((v[0][0] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((v[1][0] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn fourier_matrices_are_orthogonal() {
        let g = FourierGrid::new(&[2, 1, 2]).unwrap();
        let d = g.size() as f64;
        for f in [g.fu(), g.fv()] {
            let e = f
                .adjoint()
                .matmul(&f)
                .scale(C64::new(1.0 / d, 0.0))
                .sub(&CMatrix::identity(g.size()));
            assert!(e.max_abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_family() {
        let fam = build_family(&quad()).unwrap();
        let want1 = CMatrix::from_real_rows(&[[-3.0, 1.0], [1.0, 0.0]]);
        let wantx = CMatrix::from_real_rows(&[[-2.0, 0.0], [0.0, 1.0]]);
        assert!(fam.b1().sub(&want1).max_abs() < 1e-13);
        assert!(fam.bx(0).sub(&wantx).max_abs() < 1e-13);
    }

    #[test]
    fn delta_matrix_matches_values() {
        let sys =
            PolySystem::parse(&["x1^2 + x1*x2^2 - 1", "x1^2*x2 + x1"], &["x1", "x2"]).unwrap();
        let u = [C64::new(0.3, 0.1), C64::new(-0.7, 0.2)];
        let v = [C64::new(1.1, -0.4), C64::new(0.5, 0.9)];
        let m = delta_matrix_at(&sys, &u, &v).unwrap();
        let vals = bezout_values(&sys, &u, &v).unwrap();
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        assert!((det - vals[0]).norm() < 1e-12);
        let sym = symbolic_bezout_poly(&sys, 0).unwrap();
        let pt = [u[0], u[1], v[0], v[1]];
        assert!((sym.eval(&pt) - vals[0]).norm() < 1e-12);
        for k in 1..=2 {
            let s = symbolic_bezout_poly(&sys, k).unwrap();
            assert!((s.eval(&pt) - vals[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn collision_is_reported() {
        let sys = quad();
        let p = [C64::new(0.5, 0.0)];
        assert_eq!(bezout_values(&sys, &p, &p), Err(Error::GridCollision(0)));
    }

    #[test]
    fn symbolic_guard() {
        let names = default_names(4);
        let polys = (0..4).map(|j| MultiPoly::var(4, j)).collect();
        let sys = PolySystem::with_names(polys, names).unwrap();
        assert!(matches!(
            symbolic_family(&sys),
            Err(Error::SymbolicTooLarge(_))
        ));
    }
}
