//! Reduction of a Bezout family to a square family with invertible `B(1)`.
//!
//! Each step takes a kernel vector of `B(1)`, rotates it onto a single
//! column, finds a multiplier `B(x_k)` that does not kill that column,
//! rotates the column of `B(x_k)` onto a single row and removes that row and
//! column from every matrix. The removed row label is a polynomial that
//! vanishes on the solutions (a relation). Directions killed by every
//! matrix at once carry no information and are split off with unitary
//! transforms before and during the loop.

mod btf;
mod rank;

pub use btf::{block_triangularize, BlockTriangular};
pub use rank::{numerical_rank, PivotedQr, RankReport, RankTol, PATTERN_TOL};

use alloc::format;
use alloc::vec::Vec;

use crate::bezmat::BezoutFamily;
use crate::linalg::{argmax_abs, CMatrix, ColPivQr, Reflector, ZERO};
use crate::poly::MultiPoly;
use crate::{Error, Result, C64};

/// How the kernel column and the pivot row are moved into place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Pivoting {
    /// Unitary reflections; numerically stable.
    #[default]
    Householder,
    /// Plain elimination: zero column of `B(1)` if there is one, first usable
    /// multiplier, last nonzero entry as pivot. Reproduces hand computations
    /// on small exact examples; not meant for floating-point work at scale.
    Gauss,
}

/// Which side of the family is reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Side {
    #[default]
    Columns,
    /// Works on the transposed family; relations are then in `y`.
    Rows,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReduceOptions {
    pub tolerance: RankTol,
    pub use_blocks: bool,
    pub pivoting: Pivoting,
    pub side: Side,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            tolerance: RankTol::Auto,
            use_blocks: false,
            pivoting: Pivoting::Householder,
            side: Side::Columns,
        }
    }
}

/// One entry of the transform log.
#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    /// Common kernels split off: this many rows and columns dropped.
    Deflate { rows: usize, cols: usize },
    /// Column `col` of `B(1)` cleared with help of `B(x_k)`; row `row`
    /// removed. `k` is 1-based.
    Step { col: usize, row: usize, k: usize },
}

/// Square family with invertible `B(1)` plus the bookkeeping of how it was
/// obtained.
#[derive(Clone, Debug)]
pub struct ReducedFamily {
    pub family: BezoutFamily,
    pub relations: Vec<MultiPoly>,
    pub log: Vec<Transform>,
    /// Absolute rank threshold used throughout.
    pub threshold: f64,
    /// Numerical rank of the input `B(1)`.
    pub initial_rank: usize,
    pub initial_size: (usize, usize),
}

impl ReducedFamily {
    /// Dimension of the quotient algebra, i.e. the number of roots counted
    /// with multiplicity.
    pub fn dim(&self) -> usize {
        self.family.rows()
    }
}

/// Coefficient relative to which label coefficients are dropped.
const LABEL_TOL: f64 = 1e-14;
/// Relative zero test used by the elimination variant.
const GAUSS_ZERO: f64 = 1e-10;
/// Tolerance for recognising a constant among the relations.
const EMPTY_TOL: f64 = 1e-8;

struct Work {
    mats: Vec<CMatrix>,
    /// Current row label `j` is `sum_i row_coef[i, j] * row_labels0[i]`.
    row_coef: CMatrix,
    col_coef: CMatrix,
    log: Vec<Transform>,
    relations: Vec<CMatrix>,
}

impl Work {
    fn new(fam: &BezoutFamily) -> Self {
        Work {
            mats: fam.matrices.clone(),
            row_coef: CMatrix::identity(fam.rows()),
            col_coef: CMatrix::identity(fam.cols()),
            log: Vec::new(),
            relations: Vec::new(),
        }
    }

    fn rows(&self) -> usize {
        self.mats[0].rows()
    }

    fn cols(&self) -> usize {
        self.mats[0].cols()
    }

    fn remove(&mut self, row: usize, col: usize) {
        for m in &mut self.mats {
            m.remove_row(row);
            m.remove_col(col);
        }
        self.row_coef.remove_col(row);
        self.col_coef.remove_col(col);
    }

    /// Splits off the common right and left kernels with unitary transforms.
    fn deflate(&mut self, thr: f64) -> (usize, usize) {
        let (r0, c0) = (self.rows(), self.cols());
        let refs: Vec<&CMatrix> = self.mats.iter().collect();
        let stacked = CMatrix::vstack(&refs);
        let qr = ColPivQr::new(&stacked.adjoint());
        let rank = qr.rank(thr);
        if rank < c0 {
            let v = qr.q_thin(rank);
            for m in &mut self.mats {
                *m = m.matmul(&v);
            }
            self.col_coef = self.col_coef.matmul(&v.conj());
        }
        let refs: Vec<&CMatrix> = self.mats.iter().collect();
        let side = CMatrix::hstack(&refs);
        let qr = ColPivQr::new(&side);
        let rank = qr.rank(thr);
        if rank < r0 {
            let q = qr.q_thin(rank);
            let qa = q.adjoint();
            for m in &mut self.mats {
                *m = qa.matmul(m);
            }
            self.row_coef = self.row_coef.matmul(&q);
        }
        let dropped = (r0 - self.rows(), c0 - self.cols());
        if dropped != (0, 0) {
            self.log.push(Transform::Deflate {
                rows: dropped.0,
                cols: dropped.1,
            });
        }
        dropped
    }

    /// Drops rows and columns that vanish in every matrix, keeping labels
    /// untouched.
    fn prune_zero(&mut self) -> (usize, usize) {
        let cut = GAUSS_ZERO * self.mats.iter().fold(0.0f64, |a, m| a.max(m.max_abs()));
        let (r0, c0) = (self.rows(), self.cols());
        let rows: Vec<usize> = (0..r0)
            .filter(|&i| self.mats.iter().any(|m| m.row_max_abs(i) > cut))
            .collect();
        let cols: Vec<usize> = (0..c0)
            .filter(|&j| self.mats.iter().any(|m| m.col_max_abs(j) > cut))
            .collect();
        if rows.len() == r0 && cols.len() == c0 {
            return (0, 0);
        }
        for m in &mut self.mats {
            *m = m.select(&rows, &cols);
        }
        let all_r: Vec<usize> = (0..self.row_coef.rows()).collect();
        let all_c: Vec<usize> = (0..self.col_coef.rows()).collect();
        self.row_coef = self.row_coef.select(&all_r, &rows);
        self.col_coef = self.col_coef.select(&all_c, &cols);
        let dropped = (r0 - rows.len(), c0 - cols.len());
        self.log.push(Transform::Deflate {
            rows: dropped.0,
            cols: dropped.1,
        });
        dropped
    }

    /// One unitary step. Returns `false` if column `c` turned out to be a
    /// common kernel direction.
    fn householder_step(&mut self, v: &[C64], thr_k: &[f64]) -> bool {
        let c = argmax_abs(v);
        let (h, _) = Reflector::annihilate(v, c, 0);
        for m in &mut self.mats {
            h.apply_right(m);
        }
        h.apply_right_conj(&mut self.col_coef);
        for i in 0..self.rows() {
            self.mats[0][(i, c)] = ZERO;
        }

        let mut best = (0, 0.0);
        for k in 1..self.mats.len() {
            let nrm = self.mats[k].col_norm(c);
            if nrm / thr_k[k] > best.1 {
                best = (k, nrm / thr_k[k]);
            }
        }
        if best.1 <= 1.0 {
            return false;
        }
        let k = best.0;
        let w = self.mats[k].col(c);
        let r = argmax_abs(&w);
        let (g, _) = Reflector::annihilate(&w, r, 0);
        for m in &mut self.mats {
            g.apply_left(m, 0);
        }
        g.apply_right(&mut self.row_coef);
        self.record(r, c, k);
        true
    }

    fn gauss_step(&mut self, v: Option<&[C64]>) -> bool {
        let b1max = self.mats[0].max_abs();
        let n = self.cols();
        let zero_col = (0..n).find(|&j| self.mats[0].col_max_abs(j) <= GAUSS_ZERO * b1max);
        let c = match (zero_col, v) {
            (Some(c), _) => c,
            (None, Some(v)) => {
                // Column operation T = I + (v / v_c - e_c) e_c^T.
                let c = argmax_abs(v);
                let s: Vec<C64> = v.iter().map(|z| z / v[c]).collect();
                for m in &mut self.mats {
                    for i in 0..m.rows() {
                        let mut acc = ZERO;
                        for j in 0..n {
                            acc += m[(i, j)] * s[j];
                        }
                        m[(i, c)] = acc;
                    }
                }
                // Labels transform with (T^{-1})^T = I - e_c (s - e_c)^T.
                for i in 0..self.col_coef.rows() {
                    let lc = self.col_coef[(i, c)];
                    for j in 0..n {
                        if j != c {
                            self.col_coef[(i, j)] -= lc * s[j];
                        }
                    }
                }
                c
            }
            (None, None) => return false,
        };
        let k = (1..self.mats.len()).find(|&k| {
            let mk = &self.mats[k];
            mk.col_max_abs(c) > GAUSS_ZERO * mk.max_abs()
        });
        let Some(k) = k else { return false };
        let w = self.mats[k].col(c);
        let wmax = w.iter().fold(0.0, |a: f64, z| a.max(z.norm()));
        let r = (0..w.len())
            .rev()
            .find(|&i| w[i].norm() > GAUSS_ZERO * wmax)
            .expect("nonzero column");
        for i in 0..w.len() {
            if i == r || w[i] == ZERO {
                continue;
            }
            let f = w[i] / w[r];
            for m in &mut self.mats {
                for j in 0..m.cols() {
                    let t = m[(r, j)];
                    m[(i, j)] -= f * t;
                }
            }
            for p in 0..self.row_coef.rows() {
                let t = self.row_coef[(p, i)];
                self.row_coef[(p, r)] += f * t;
            }
        }
        self.record(r, c, k);
        true
    }

    fn record(&mut self, r: usize, c: usize, k: usize) {
        let all: Vec<usize> = (0..self.row_coef.rows()).collect();
        self.relations.push(self.row_coef.select(&all, &[r]));
        self.log.push(Transform::Step { col: c, row: r, k });
        self.remove(r, c);
    }
}

fn combine(labels: &[MultiPoly], coef: &CMatrix, j: usize) -> MultiPoly {
    let nv = labels.first().map_or(0, MultiPoly::nvars);
    let mut p = MultiPoly::zero(nv);
    for (i, l) in labels.iter().enumerate() {
        let c = coef[(i, j)];
        if c != ZERO {
            p = &p + &l.scale(c);
        }
    }
    p.clean(LABEL_TOL)
}

/// True when a combination of the relations is a nonzero constant, so the
/// system has no roots at all and the quotient is zero.
fn proves_empty(fam: &BezoutFamily, relations: &[CMatrix]) -> bool {
    let Some(one) = fam
        .row_labels
        .iter()
        .position(|l| l.total_degree() == Some(0))
    else {
        return false;
    };
    if relations.is_empty() {
        return false;
    }
    let refs: Vec<&CMatrix> = relations.iter().collect();
    let r = CMatrix::hstack(&refs);
    let qr = ColPivQr::new(&r);
    let rank = qr.rank(EMPTY_TOL * qr.diag().iter().copied().fold(0.0, f64::max));
    let q = qr.q_thin(rank);
    // Distance from the unit vector of the label 1 to the span.
    let proj: f64 = q.row(one).iter().map(|z| z.norm_sqr()).sum();
    1.0 - proj <= EMPTY_TOL
}

fn transpose_family(f: &BezoutFamily) -> BezoutFamily {
    BezoutFamily {
        matrices: f.matrices.iter().map(CMatrix::transpose).collect(),
        row_labels: f.col_labels.clone(),
        col_labels: f.row_labels.clone(),
    }
}

/// Reduces `fam` until `B(1)` is square and numerically invertible.
///
/// Fails with [`Error::NonZeroDimensional`] when that cannot be reached,
/// which is what happens for systems with infinitely many solutions.
pub fn reduce_family(fam: &BezoutFamily, opts: &ReduceOptions) -> Result<ReducedFamily> {
    if opts.side == Side::Rows {
        let t = transpose_family(fam);
        let mut out = reduce_family(
            &t,
            &ReduceOptions {
                side: Side::Columns,
                ..*opts
            },
        )?;
        out.family = transpose_family(&out.family);
        out.initial_size = (fam.rows(), fam.cols());
        return Ok(out);
    }
    if fam.matrices.len() < 2 {
        return Err(Error::Invalid(
            "family needs B(1) and at least one B(x_k)".into(),
        ));
    }
    let thr = opts.tolerance.threshold(fam.b1(), fam.b1().max_col_norm());
    let initial = PivotedQr::new(fam.b1(), opts.use_blocks, thr);
    let initial_rank = initial.qr.rank(thr);

    let b1max = fam.b1().max_abs().max(f64::MIN_POSITIVE);
    let fam_max = fam.max_abs().max(f64::MIN_POSITIVE);
    let thr_stack = thr * (fam_max / b1max);
    // Per-matrix zero thresholds, scaled to each matrix.
    let thr_k: Vec<f64> = fam
        .matrices
        .iter()
        .map(|m| (thr * m.max_abs() / b1max).max(f64::MIN_POSITIVE))
        .collect();

    let mut w = Work::new(fam);
    match opts.pivoting {
        Pivoting::Householder => {
            w.deflate(thr_stack);
        }
        Pivoting::Gauss => {
            w.prune_zero();
        }
    }

    let max_steps = fam.rows().max(fam.cols()) + 1;
    for _ in 0..max_steps {
        if w.rows() == 0 || w.cols() == 0 {
            break;
        }
        let pq = if opts.pivoting == Pivoting::Gauss {
            PivotedQr::new(&w.mats[0], false, thr)
        } else {
            PivotedQr::new(&w.mats[0], opts.use_blocks, thr)
        };
        let rank = pq.qr.rank(thr);
        if rank >= w.cols() {
            break;
        }
        let v = pq.null_vector(rank).expect("rank below column count");
        let progressed = match opts.pivoting {
            Pivoting::Householder => w.householder_step(&v, &thr_k),
            Pivoting::Gauss => w.gauss_step(Some(&v)),
        };
        if !progressed {
            let dropped = match opts.pivoting {
                Pivoting::Householder => w.deflate(thr_stack),
                Pivoting::Gauss => w.prune_zero(),
            };
            if dropped == (0, 0) {
                return Err(Error::NonZeroDimensional(format!(
                    "B(1) stays singular at size {}x{} and no multiplier separates its kernel",
                    w.rows(),
                    w.cols()
                )));
            }
        }
    }
    if w.rows() != w.cols() && opts.pivoting == Pivoting::Householder {
        w.deflate(thr_stack);
    }
    if w.rows() != w.cols() {
        return Err(Error::NonZeroDimensional(format!(
            "reduction ends with a {}x{} B(1)",
            w.rows(),
            w.cols()
        )));
    }
    if w.rows() == 0 && !proves_empty(fam, &w.relations) {
        return Err(Error::NonZeroDimensional(
            "reduction removed every row".into(),
        ));
    }
    let fr = PivotedQr::new(&w.mats[0], false, thr);
    if w.cols() > 0 && fr.qr.rank(thr) < w.cols() {
        return Err(Error::NonZeroDimensional("B(1) remains singular".into()));
    }

    let row_labels = (0..w.rows())
        .map(|j| combine(&fam.row_labels, &w.row_coef, j))
        .collect();
    let col_labels = (0..w.cols())
        .map(|j| combine(&fam.col_labels, &w.col_coef, j))
        .collect();
    let relations = w
        .relations
        .iter()
        .map(|c| combine(&fam.row_labels, c, 0))
        .collect();
    Ok(ReducedFamily {
        family: BezoutFamily {
            matrices: w.mats,
            row_labels,
            col_labels,
        },
        relations,
        log: w.log,
        threshold: thr,
        initial_rank,
        initial_size: (fam.rows(), fam.cols()),
    })
}

/// Dimensions reached by reducing the column side and the row side; for a
/// zero-dimensional system both agree.
pub fn compare_sides(fam: &BezoutFamily, opts: &ReduceOptions) -> Result<(usize, usize)> {
    let a = reduce_family(
        fam,
        &ReduceOptions {
            side: Side::Columns,
            ..*opts
        },
    )?;
    let b = reduce_family(
        fam,
        &ReduceOptions {
            side: Side::Rows,
            ..*opts
        },
    )?;
    Ok((a.dim(), b.dim()))
}
