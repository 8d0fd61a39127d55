use alloc::vec::Vec;
use core::ops::Range;

use super::btf::{block_triangularize, BlockTriangular};
use crate::linalg::{CMatrix, ColPivQr};

/// Threshold policy for numerical rank decisions.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum RankTol {
    /// `N * eps * max|B(1)|`, with `N` the larger side of the matrix.
    #[default]
    Auto,
    /// `tau * |R_00|` of the column-pivoted QR, i.e. `tau` times the largest
    /// column norm.
    Relative(f64),
    /// A fixed value.
    Absolute(f64),
}

impl RankTol {
    /// `r00` is the reference magnitude for [`RankTol::Relative`], the
    /// largest column norm of `m`.
    pub fn threshold(self, m: &CMatrix, r00: f64) -> f64 {
        match self {
            RankTol::Auto => m.rows().max(m.cols()) as f64 * f64::EPSILON * m.max_abs(),
            RankTol::Relative(t) => t * r00,
            RankTol::Absolute(t) => t,
        }
    }

    /// Relative tolerance equivalent, used for conditioning checks.
    pub fn relative(self, m: &CMatrix, r00: f64) -> f64 {
        if r00 == 0.0 {
            return 0.0;
        }
        self.threshold(m, r00) / r00
    }
}

/// Relative pattern tolerance for the block structure.
pub const PATTERN_TOL: f64 = 1e-8;

/// Diagonal of a rank-revealing QR together with the rank decision.
#[derive(Clone, Debug)]
pub struct RankReport {
    /// `|R_kk|` in elimination order.
    pub diag: Vec<f64>,
    pub threshold: f64,
    pub rank: usize,
    /// Diagonal ranges of the column blocks when block pivoting was used.
    pub blocks: Option<Vec<Range<usize>>>,
}

impl RankReport {
    /// Diagonal entries above the threshold.
    pub fn occupied(&self) -> impl Iterator<Item = f64> + '_ {
        let t = self.threshold;
        self.diag.iter().copied().filter(move |&d| d > t)
    }

    /// `log10(max / min)` over the occupied diagonal.
    pub fn span_decades(&self) -> f64 {
        let (lo, hi) = self
            .occupied()
            .fold((f64::INFINITY, 0.0f64), |(l, h), d| (l.min(d), h.max(d)));
        if hi == 0.0 {
            0.0
        } else {
            libm::log10(hi / lo)
        }
    }
}

/// Column-pivoted QR factorisation, optionally restricted to the diagonal
/// blocks of the block triangular form.
pub struct PivotedQr {
    pub qr: ColPivQr,
    pub structure: Option<BlockTriangular>,
}

impl core::fmt::Debug for PivotedQr {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PivotedQr")
            .field("diag", &self.qr.diag())
            .field("blocks", &self.structure.is_some())
            .finish()
    }
}

impl PivotedQr {
    /// Blocks whose remaining columns fall to `threshold` are deferred, see
    /// [`ColPivQr::with_blocks`].
    pub fn new(m: &CMatrix, use_blocks: bool, threshold: f64) -> Self {
        if use_blocks {
            let bt = block_triangularize(m, PATTERN_TOL);
            let qr = ColPivQr::with_blocks(&bt.apply(m), &bt.col_blocks, threshold);
            PivotedQr {
                qr,
                structure: Some(bt),
            }
        } else {
            PivotedQr {
                qr: ColPivQr::new(m),
                structure: None,
            }
        }
    }

    /// Null vector in the original column order.
    pub fn null_vector(&self, rank: usize) -> Option<Vec<crate::C64>> {
        let v = crate::linalg::null_vector(&self.qr, rank)?;
        Some(match &self.structure {
            None => v,
            Some(bt) => {
                let mut out = alloc::vec![crate::C64::new(0.0, 0.0); v.len()];
                for (k, &c) in bt.col_perm.iter().enumerate() {
                    out[c] = v[k];
                }
                out
            }
        })
    }
}

/// Numerical rank of `m` from the diagonal of a pivoted QR.
pub fn numerical_rank(m: &CMatrix, tol: RankTol, use_blocks: bool) -> RankReport {
    let threshold = tol.threshold(m, m.max_col_norm());
    let pq = PivotedQr::new(m, use_blocks, threshold);
    RankReport {
        rank: pq.qr.rank(threshold),
        diag: pq.qr.diag().to_vec(),
        threshold,
        blocks: pq.structure.map(|_| pq.qr.blocks().to_vec()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn rank_of_outer_product_sum() {
        let n = 6;
        let a = CMatrix::from_fn(n, n, |i, j| {
            let (x, y) = (i as f64 + 1.0, j as f64 - 2.5);
            C64::new(x * y + (x * x) * 0.5, 0.0)
        });
        let r = numerical_rank(&a, RankTol::Auto, false);
        assert_eq!(r.rank, 2);
        assert_eq!(r.diag.len(), n);
        let rb = numerical_rank(&a, RankTol::Relative(1e-10), true);
        assert_eq!(rb.rank, 2);
    }

    #[test]
    fn span_of_occupied_entries() {
        let r = RankReport {
            diag: alloc::vec![100.0, 1.0, 1e-20],
            threshold: 1e-12,
            rank: 2,
            blocks: None,
        };
        assert!((r.span_decades() - 2.0).abs() < 1e-12);
    }
}
