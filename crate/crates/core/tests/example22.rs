//! Bivariate system x1^2 + x1*x2^2 - 1 = 0, x1^2*x2 + x1 = 0.

use bezroots::bezmat::{
    build_family, symbolic_bezout_poly, symbolic_delta, symbolic_family, BezoutFamily,
};
use bezroots::linalg::CMatrix;
use bezroots::poly::{format_poly, parse_poly, MultiPoly, PolySystem};
use bezroots::reduce::{compare_sides, reduce_family, Pivoting, ReduceOptions, Transform};
use bezroots::solve::{companions, joint_eigen, solve_system, verify, SolveOptions};
use bezroots::C64;

fn system() -> PolySystem {
    PolySystem::parse(&["x1^2 + x1*x2^2 - 1", "x1^2*x2 + x1"], &["x1", "x2"]).unwrap()
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn xy() -> Vec<String> {
    names(&["x1", "x2", "y1", "y2"])
}

fn labels(ls: &[MultiPoly], vars: &[&str]) -> Vec<String> {
    ls.iter().map(|p| format_poly(p, &names(vars))).collect()
}

/// Rows (1, x2, x2^2, x1, x1x2, x1x2^2), columns (1, y1, y1y2, y1^2, y1^2y2, y1^3).
fn table(entries: &[(usize, usize, f64)]) -> CMatrix {
    let mut m = CMatrix::zeros(6, 6);
    for &(i, j, v) in entries {
        m[(i, j)] = C64::new(v, 0.0);
    }
    m
}

fn printed_b1() -> CMatrix {
    table(&[
        (0, 2, -1.0),
        (0, 5, 1.0),
        (1, 1, -1.0),
        (1, 4, -1.0),
        (3, 3, 1.0),
        (4, 2, -1.0),
        (5, 1, -1.0),
    ])
}

fn printed_bx1() -> CMatrix {
    table(&[(0, 3, 1.0), (3, 5, 1.0), (4, 4, -1.0), (5, 3, -1.0)])
}

fn printed_bx2() -> CMatrix {
    table(&[
        (0, 0, -1.0),
        (1, 1, -1.0),
        (1, 2, -1.0),
        (1, 5, 1.0),
        (2, 1, -1.0),
        (2, 4, -1.0),
        (3, 1, -1.0),
        (4, 0, -1.0),
        (4, 3, 1.0),
        (5, 2, -1.0),
    ])
}

#[test]
fn labels_follow_box_order() {
    let fam = build_family(&system()).unwrap();
    assert_eq!(
        labels(&fam.row_labels, &["x1", "x2"]),
        ["1", "x2", "x2^2", "x1", "x1*x2", "x1*x2^2"]
    );
    assert_eq!(
        labels(&fam.col_labels, &["y1", "y2"]),
        ["1", "y1", "y1*y2", "y1^2", "y1^2*y2", "y1^3"]
    );
}

#[test]
fn symbolic_matrices_match_printed_tables() {
    let fam = symbolic_family(&system()).unwrap();
    assert_eq!(fam.matrices[0], printed_b1());
    assert_eq!(fam.matrices[1], printed_bx1());
    assert_eq!(fam.matrices[2], printed_bx2());
}

#[test]
fn fourier_family_matches_symbolic() {
    let sys = system();
    let num = build_family(&sys).unwrap();
    let sym = symbolic_family(&sys).unwrap();
    assert_eq!(num.row_labels, sym.row_labels);
    assert_eq!(num.col_labels, sym.col_labels);
    for (a, b) in num.matrices.iter().zip(&sym.matrices) {
        assert!(a.sub(b).max_abs() < 1e-12);
    }
}

#[test]
fn finite_difference_matrices() {
    let sys = system();
    let v = xy();
    let p = |s: &str| parse_poly(s, &v).unwrap();
    let d1 = symbolic_delta(&sys, 0).unwrap();
    assert_eq!(d1[0][0], p("x1 + x2^2 + y1"));
    assert_eq!(d1[0][1], p("x2*y1 + y1*y2"));
    assert_eq!(d1[1][0], p("1 + x1*x2 + x2*y1"));
    assert_eq!(d1[1][1], p("y1^2"));
    let dx1 = symbolic_delta(&sys, 1).unwrap();
    assert_eq!(dx1[0][0], p("1 + x1*y1"));
    let dx2 = symbolic_delta(&sys, 2).unwrap();
    assert_eq!(dx2[0][1], p("1 - y1^2 + x2*y1*y2"));
    assert_eq!(dx2[1][1], p("-y1"));
    let at: Vec<C64> = [0.0, 0.0, 1.0, 1.0]
        .iter()
        .map(|&x| C64::new(x, 0.0))
        .collect();
    for row in &d1 {
        for e in row {
            assert_eq!(e.eval(&at), C64::new(1.0, 0.0));
        }
    }
}

#[test]
fn bezout_polynomials_match_printed() {
    let sys = system();
    let v = xy();
    let printed = [
        "-x2*y1 - x1*x2^2*y1 + x1*y1^2 + y1^3 - y1*y2 - x1*x2*y1*y2 - x2*y1^2*y2",
        "y1^2 - x1*x2^2*y1^2 + x1*y1^3 - x1*x2*y1^2*y2",
        "-1 - x1*x2 - x1*y1 - x2*y1 - x2^2*y1 + x1*x2*y1^2 + x2*y1^3 - x2*y1*y2 - x1*x2^2*y1*y2 - x2^2*y1^2*y2",
    ];
    for (k, s) in printed.iter().enumerate() {
        assert_eq!(
            symbolic_bezout_poly(&sys, k).unwrap(),
            parse_poly(s, &v).unwrap(),
            "delta {k}"
        );
    }
}

#[test]
fn reduction_dimension_and_rank() {
    let fam = build_family(&system()).unwrap();
    let red = reduce_family(&fam, &ReduceOptions::default()).unwrap();
    assert_eq!(red.initial_rank, 5);
    assert_eq!(red.dim(), 3);
    assert_eq!(
        compare_sides(&fam, &ReduceOptions::default()).unwrap(),
        (3, 3)
    );
}

fn gauss_reduced() -> bezroots::reduce::ReducedFamily {
    let fam = build_family(&system()).unwrap();
    reduce_family(
        &fam,
        &ReduceOptions {
            pivoting: Pivoting::Gauss,
            ..Default::default()
        },
    )
    .unwrap()
}

#[test]
fn elimination_hook_reproduces_hand_computation() {
    let red = gauss_reduced();
    assert_eq!(
        labels(&red.family.row_labels, &["x1", "x2"]),
        ["1", "x2", "x2^2"]
    );
    assert_eq!(
        labels(&red.family.col_labels, &["y1", "y2"]),
        ["y1^2", "y1^2*y2", "y1^3"]
    );
    let b1 = CMatrix::from_real_rows(&[[0.0, 0.0, 1.0], [-1.0, -1.0, 0.0], [-1.0, 0.0, 0.0]]);
    assert!(red.family.b1().sub(&b1).max_abs() < 1e-10);
    let cs = companions(&red).unwrap();
    let x1 = CMatrix::from_real_rows(&[[0.0, -1.0, 0.0], [-1.0, 0.0, -1.0], [-1.0, 0.0, 0.0]]);
    let x2 = CMatrix::from_real_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, -1.0]]);
    assert!(cs.matrices[0].sub(&x1).max_abs() < 1e-10);
    assert!(cs.matrices[1].sub(&x2).max_abs() < 1e-10);
    // Relations found on the way vanish on the variety.
    assert_eq!(
        red.log
            .iter()
            .filter(|t| matches!(t, Transform::Step { .. }))
            .count(),
        3
    );
    let want = parse_poly("x1 + x2^2 + x2", &names(&["x1", "x2"])).unwrap();
    assert!(
        red.relations.iter().any(|r| r.max_diff(&want) < 1e-12),
        "{:?}",
        labels(&red.relations, &["x1", "x2"])
    );
}

/// Multiplication by x_j in the row basis: x_j * row(xi) = row(xi) * X_j at
/// every root.
#[test]
fn companions_act_on_row_labels() {
    let sys = system();
    let fam = build_family(&sys).unwrap();
    let red = reduce_family(&fam, &ReduceOptions::default()).unwrap();
    let cs = companions(&red).unwrap();
    let mut rs = joint_eigen(&cs, 7).unwrap();
    verify(&mut rs, &sys);
    for r in &rs.roots {
        let lab: Vec<C64> = red.family.row_labels.iter().map(|p| p.eval(&r.x)).collect();
        for (j, x) in cs.matrices.iter().enumerate() {
            let rhs: Vec<C64> = (0..x.cols())
                .map(|c| (0..x.rows()).map(|i| lab[i] * x[(i, c)]).sum())
                .collect();
            for (a, b) in lab.iter().zip(&rhs) {
                assert!((a * r.x[j] - b).norm() < 1e-9);
            }
        }
    }
}

/// row_labels(xi) . B_k . col_labels(eta)^T agrees with delta(g_k)(xi, eta)
/// for a root xi and any eta, before and after reduction.
#[test]
fn bilinear_form_is_preserved_at_roots() {
    let sys = system();
    let fam = build_family(&sys).unwrap();
    let sol = solve_system(&sys, &SolveOptions::default()).unwrap();
    let eta = [C64::new(0.4, -0.3), C64::new(-1.2, 0.7)];
    for opts in [
        ReduceOptions::default(),
        ReduceOptions {
            pivoting: Pivoting::Gauss,
            ..Default::default()
        },
    ] {
        let red = reduce_family(&fam, &opts).unwrap();
        for r in &sol.roots.roots {
            for k in 0..3 {
                let before = fam.bilinear(k, &r.x, &eta);
                let after = red.family.bilinear(k, &r.x, &eta);
                assert!((before - after).norm() < 1e-8, "{opts:?} k={k}");
            }
        }
    }
}

#[test]
fn roots_match_table() {
    let sol = solve_system(&system(), &SolveOptions::default()).unwrap();
    let mut got: Vec<[C64; 2]> = sol.roots.roots.iter().map(|r| [r.x[0], r.x[1]]).collect();
    let key = |z: &C64| ((z.re * 1e5).round() as i64, (z.im * 1e5).round() as i64);
    got.sort_by_key(|r| key(&r[0]));
    let table = [
        [C64::new(-1.32472, 0.0), C64::new(0.75488, 0.0)],
        [C64::new(0.66236, -0.56228), C64::new(-0.87744, -0.74486)],
        [C64::new(0.66236, 0.56228), C64::new(-0.87744, 0.74486)],
    ];
    for (g, t) in got.iter().zip(&table) {
        for j in 0..2 {
            assert!((g[j] - t[j]).norm() < 1e-4, "{g:?} vs {t:?}");
        }
    }
    for r in &sol.roots.roots {
        assert!(r.max_residual() < 1e-12);
        assert_eq!(r.multiplicity, 1);
    }
}

#[test]
fn transposed_family_roundtrip() {
    let fam = build_family(&system()).unwrap();
    let t = BezoutFamily {
        matrices: fam.matrices.iter().map(CMatrix::transpose).collect(),
        row_labels: fam.col_labels.clone(),
        col_labels: fam.row_labels.clone(),
    };
    assert_eq!(
        reduce_family(&t, &ReduceOptions::default()).unwrap().dim(),
        3
    );
}
