//! Multiplication matrices and root extraction.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bezmat::{build_family, BezoutFamily};
use crate::bezout1d::right_divide;
use crate::linalg::{eigen, vec_norm, CMatrix, ColPivQr};
use crate::poly::PolySystem;
use crate::reduce::{reduce_family, ReduceOptions, ReducedFamily};
use crate::{Error, Result, C64};

/// Raised alongside the companions when `B(1)` is close to singular
/// relative to the rank tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditioningWarning {
    /// Smallest over largest pivoted-QR diagonal entry of `B(1)`.
    pub rcond: f64,
    /// Relative tolerance it was compared against.
    pub tolerance: f64,
}

/// Multiplication matrices `X_j = B(x_j) B(1)^{-1}`, which pairwise commute
/// for a zero-dimensional system.
#[derive(Clone, Debug)]
pub struct CompanionSet {
    pub matrices: Vec<CMatrix>,
    pub warning: Option<ConditioningWarning>,
}

impl CompanionSet {
    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, CMatrix::rows)
    }

    /// Largest `|X_i X_j - X_j X_i|` relative to `|X_i| |X_j|` (Frobenius).
    pub fn commutation_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.matrices.len() {
            for j in i + 1..self.matrices.len() {
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                let c = a.matmul(b).sub(&b.matmul(a)).norm_fro();
                let s = (a.norm_fro() * b.norm_fro()).max(f64::MIN_POSITIVE);
                worst = worst.max(c / s);
            }
        }
        worst
    }
}

/// Forms the multiplication matrices of a reduced family.
pub fn companions(red: &ReducedFamily) -> Result<CompanionSet> {
    companions_of(&red.family, red.threshold)
}

/// Same as [`companions`] for a family whose `B(1)` is already invertible.
/// `threshold` is the absolute rank threshold `B(1)` was judged with.
pub fn companions_of(fam: &BezoutFamily, threshold: f64) -> Result<CompanionSet> {
    let b1 = fam.b1();
    if !b1.is_square() {
        return Err(Error::Singular);
    }
    if b1.rows() == 0 {
        // Empty quotient: the system has no roots.
        return Ok(CompanionSet {
            matrices: vec![CMatrix::zeros(0, 0); fam.nvars()],
            warning: None,
        });
    }
    let qr = ColPivQr::new(b1);
    let d = qr.diag();
    let (lo, hi) = d
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    if hi == 0.0 {
        return Err(Error::Singular);
    }
    let rcond = lo / hi;
    let tol = threshold / hi;
    let warning = (rcond <= tol).then_some(ConditioningWarning {
        rcond,
        tolerance: tol,
    });
    let matrices = (0..fam.nvars())
        .map(|k| right_divide(fam.bx(k), b1))
        .collect::<Result<Vec<_>>>()?;
    Ok(CompanionSet { matrices, warning })
}

/// One root with its per-equation residuals `|f_i(x)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub x: Vec<C64>,
    pub residuals: Vec<f64>,
    /// Size of the eigenvalue cluster this root came from.
    pub multiplicity: usize,
}

impl Root {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Roots together with the eigen data they were read from.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Unit eigenvectors of the random combination, `vectors[i]` belongs to
    /// `roots[i]` until [`verify`] reorders the roots.
    pub vectors: Vec<Vec<C64>>,
    /// Coefficients `c_j` of `sum c_j X_j`.
    pub combination: Vec<f64>,
    /// Seed that produced `combination`.
    pub seed: u64,
    /// Number of combinations tried.
    pub attempts: usize,
}

/// Clustering radius relative to the norm of the combined matrix.
pub const CLUSTER_TOL: f64 = 1e-8;
const MAX_ATTEMPTS: usize = 5;

fn clusters(values: &[C64], radius: f64) -> Vec<usize> {
    // Single linkage; returns the cluster size for each value.
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], mut i: usize) -> usize {
        while l[i] != i {
            l[i] = l[l[i]];
            i = l[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut label, i)).collect();
    roots
        .iter()
        .map(|r| roots.iter().filter(|s| *s == r).count())
        .collect()
}

/// Eigenvectors of a random combination `sum c_j X_j` give the roots: the
/// `j`-th coordinate is the Rayleigh-type ratio `(X_j v)_i / v_i` at the
/// largest entry of `v`.
///
/// The combination is drawn from `seed`. If eigenvalues cluster the draw is
/// repeated with derived seeds; clusters that survive are reported through
/// [`Root::multiplicity`].
pub fn joint_eigen(cs: &CompanionSet, seed: u64) -> Result<RootSet> {
    let n = cs.matrices.len();
    let dim = cs.dim();
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let s = seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let comb: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if dim == 0 {
            return Ok(RootSet {
                roots: Vec::new(),
                vectors: Vec::new(),
                combination: comb,
                seed: s,
                attempts: 1,
            });
        }
        let mut xc = CMatrix::zeros(dim, dim);
        for (c, x) in comb.iter().zip(&cs.matrices) {
            xc.axpy(C64::new(*c, 0.0), x);
        }
        let e = eigen(&xc)?;
        let mult = clusters(
            &e.values,
            CLUSTER_TOL * xc.norm_fro().max(f64::MIN_POSITIVE),
        );
        let vectors: Vec<Vec<C64>> = (0..dim).map(|k| e.vectors.col(k)).collect();
        let roots = vectors
            .iter()
            .zip(&mult)
            .map(|(v, &m)| {
                let i = crate::linalg::argmax_abs(v);
                let x = cs
                    .matrices
                    .iter()
                    .map(|xj| xj.row(i).iter().zip(v).map(|(a, b)| a * b).sum::<C64>() / v[i])
                    .collect();
                Root {
                    x,
                    residuals: Vec::new(),
                    multiplicity: m,
                }
            })
            .collect();
        let clean = mult.iter().all(|&m| m == 1);
        last = Some(RootSet {
            roots,
            vectors,
            combination: comb,
            seed: s,
            attempts: attempt + 1,
        });
        if clean {
            break;
        }
    }
    last.ok_or(Error::NoConvergence)
}

/// Fills in residuals and sorts roots by their largest residual.
pub fn verify(rs: &mut RootSet, sys: &PolySystem) {
    for r in &mut rs.roots {
        r.residuals = sys.eval(&r.x).iter().map(|v| v.norm()).collect();
    }
    let mut idx: Vec<usize> = (0..rs.roots.len()).collect();
    idx.sort_by(|&a, &b| {
        rs.roots[a]
            .max_residual()
            .total_cmp(&rs.roots[b].max_residual())
    });
    rs.roots = idx.iter().map(|&i| rs.roots[i].clone()).collect();
    if rs.vectors.len() == idx.len() {
        rs.vectors = idx.iter().map(|&i| rs.vectors[i].clone()).collect();
    }
}

/// Counts of `log10(max residual)` in equal-width bins over `range`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Values outside `range` land in the first or last bin; an exact zero
/// residual counts as the leftmost bin.
pub fn log_error_histogram(rs: &RootSet, bins: usize, range: (f64, f64)) -> Histogram {
    let bins = bins.max(1);
    let (lo, hi) = range;
    let w = (hi - lo) / bins as f64;
    let edges = (0..=bins).map(|k| lo + w * k as f64).collect();
    let mut counts = vec![0; bins];
    for r in &rs.roots {
        let e = r.max_residual();
        let b = if e <= 0.0 {
            0
        } else {
            let t = (libm::log10(e) - lo) / w;
            if t < 0.0 {
                0
            } else {
                (t as usize).min(bins - 1)
            }
        };
        counts[b] += 1;
    }
    Histogram { edges, counts }
}

/// Settings for [`solve_system`].
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SolveOptions {
    pub reduce: ReduceOptions,
    pub seed: u64,
}

/// Everything the pipeline produced, stage by stage.
#[derive(Clone, Debug)]
pub struct Solution {
    pub family: BezoutFamily,
    pub reduced: ReducedFamily,
    pub companions: CompanionSet,
    pub roots: RootSet,
}

/// Full pipeline: Bezout family, reduction, companions, roots, residuals.
pub fn solve_system(sys: &PolySystem, opts: &SolveOptions) -> Result<Solution> {
    let family = build_family(sys)?;
    let reduced = reduce_family(&family, &opts.reduce)?;
    let companions = companions(&reduced)?;
    let mut roots = joint_eigen(&companions, opts.seed)?;
    verify(&mut roots, sys);
    Ok(Solution {
        family,
        reduced,
        companions,
        roots,
    })
}

/// `|X_j v - x_j v| / |v|` for every root and coordinate; small values mean
/// the root coordinates are consistent with the eigenvectors.
pub fn eigen_residual(cs: &CompanionSet, rs: &RootSet) -> f64 {
    let mut worst: f64 = 0.0;
    for (r, v) in rs.roots.iter().zip(&rs.vectors) {
        for (xj, lam) in cs.matrices.iter().zip(&r.x) {
            let xv = xj.matvec(v);
            let d: Vec<C64> = xv.iter().zip(v).map(|(a, b)| a - b * lam).collect();
            let scale = xj.norm_fro().max(1.0);
            worst = worst.max(vec_norm(&d) / (vec_norm(v) * scale));
        }
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_solution(seed: u64) -> Solution {
        let sys = PolySystem::parse(&["x1^2 - 3*x1 + 2"], &["x1"]).unwrap();
        solve_system(
            &sys,
            &SolveOptions {
                seed,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn univariate_companion_is_barnett() {
        let s = quad_solution(1);
        let x = &s.companions.matrices[0];
        assert!(
            x.sub(&CMatrix::from_real_rows(&[[0.0, -2.0], [1.0, 3.0]]))
                .max_abs()
                < 1e-12
        );
        assert!(s.companions.warning.is_none());
        let mut xs: Vec<f64> = s.roots.roots.iter().map(|r| r.x[0].re).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] - 1.0).abs() < 1e-12 && (xs[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_bins() {
        let mut s = quad_solution(3).roots;
        s.roots[0].residuals = vec![0.0];
        s.roots[1].residuals = vec![1e-3];
        let h = log_error_histogram(&s, 4, (-16.0, 0.0));
        assert_eq!(h.counts, vec![1, 0, 0, 1]);
        assert_eq!(h.edges.len(), 5);
    }

    #[test]
    fn constant_system_has_no_roots() {
        let c = PolySystem::parse(&["2"], &["x1"])
            .unwrap()
            .with_multidegree(vec![1])
            .unwrap();
        let s = solve_system(&c, &SolveOptions::default()).unwrap();
        assert_eq!(s.reduced.dim(), 0);
        assert!(s.roots.roots.is_empty());
        assert!(s
            .reduced
            .relations
            .iter()
            .all(|r| r.total_degree() == Some(0)));
        let zero = PolySystem::parse(&["0"], &["x1"])
            .unwrap()
            .with_multidegree(vec![1])
            .unwrap();
        assert!(matches!(
            solve_system(&zero, &SolveOptions::default()),
            Err(Error::NonZeroDimensional(_))
        ));
    }

    #[test]
    fn inconsistent_system_has_no_roots() {
        // f1 + f2 = 1, so B(1) vanishes identically.
        let sys = PolySystem::parse(
            &["x1*x2 + 2*x1 + x2", "-x1*x2 - 2*x1 - x2 + 1"],
            &["x1", "x2"],
        )
        .unwrap();
        let s = solve_system(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(s.reduced.dim(), 0);
        assert!(s.roots.roots.is_empty());
    }

    #[test]
    fn clustering() {
        let v = [
            C64::new(1.0, 0.0),
            C64::new(1.0 + 1e-12, 0.0),
            C64::new(3.0, 0.0),
        ];
        assert_eq!(clusters(&v, 1e-9), vec![2, 2, 1]);
    }
}
