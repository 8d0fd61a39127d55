use bezroots::bezmat::{
    build_family, evaluation_matrix, interpolate, symbolic_family, FourierGrid,
};
use bezroots::bezout1d::{barnett, bezout_matrix_1d, generalized_barnett, UniPoly};
use bezroots::linalg::CMatrix;
use bezroots::poly::{
    default_names, divided_difference, format_poly, parse_poly, Monomial, MultiPoly, PolySystem,
};
use bezroots::reduce::block_triangularize;
use bezroots::C64;
use proptest::prelude::*;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn coefficient() -> impl Strategy<Value = C64> {
    prop_oneof![
        (-9i32..=9).prop_map(|k| c(k as f64)),
        (-1e6f64..1e6, -1e6f64..1e6).prop_map(|(a, b)| C64::new(a, b)),
        (-1e-7f64..1e-7).prop_map(c),
        (-1e3f64..1e3).prop_map(|b| C64::new(0.0, b)),
    ]
}

fn multipoly(n: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), coefficient()), 0..6).prop_map(
        move |ts| MultiPoly::from_terms(n, ts.into_iter().map(|(e, c)| (Monomial(e), c))).unwrap(),
    )
}

/// Univariate polynomial with integer coefficients and nonzero leading one.
fn unipoly(min_deg: usize, max_deg: usize) -> impl Strategy<Value = UniPoly> {
    (
        prop::collection::vec(-5i32..=5, min_deg..=max_deg),
        prop_oneof![-4i32..=-1, 1i32..=4],
    )
        .prop_map(|(low, lead)| {
            let mut cs: Vec<C64> = low.iter().map(|&k| c(k as f64)).collect();
            cs.push(c(lead as f64));
            UniPoly::from_ascending(cs)
        })
}

fn point(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(
        (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| C64::new(a, b)),
        n,
    )
}

/// Square system with integer coefficients inside the box of `d`.
fn int_system() -> impl Strategy<Value = PolySystem> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(1u32..=2, n)))
        .prop_flat_map(|(n, d)| {
            let size: usize = d.iter().map(|&k| k as usize + 1).product();
            (
                Just(n),
                Just(d),
                prop::collection::vec(prop::collection::vec(-3i32..=3, size), n),
            )
        })
        .prop_map(|(n, d, coeffs)| {
            let polys = coeffs
                .iter()
                .map(|cs| {
                    let terms = cs.iter().enumerate().map(|(idx, &k)| {
                        let mut e = vec![0u32; n];
                        let mut r = idx;
                        for j in (0..n).rev() {
                            e[j] = (r % (d[j] as usize + 1)) as u32;
                            r /= d[j] as usize + 1;
                        }
                        (Monomial(e), c(k as f64))
                    });
                    MultiPoly::from_terms(n, terms).unwrap()
                })
                .collect();
            PolySystem::new(polys).unwrap().with_multidegree(d).unwrap()
        })
}

fn rel_err(a: &CMatrix, b: &CMatrix) -> f64 {
    a.sub(b).max_abs() / a.max_abs().max(b.max_abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn format_then_parse_is_identity(p in (1usize..=3).prop_flat_map(|n| multipoly(n, 4))) {
        let names = default_names(p.nvars());
        let text = format_poly(&p, &names);
        let back = parse_poly(&text, &names).unwrap();
        prop_assert_eq!(back, p, "{}", text);
    }

    #[test]
    fn generalized_barnett_is_g_of_barnett(f in unipoly(1, 4), g in prop::collection::vec(-4i32..=4, 1..8)) {
        let g = UniPoly::from_ascending(g.iter().map(|&k| c(k as f64)).collect());
        let want = g.eval_matrix(&barnett(&f).unwrap());
        let got = generalized_barnett(&f, &g).unwrap();
        prop_assert!(rel_err(&got, &want) < 1e-8, "{:?} vs {:?}", got, want);
    }

    #[test]
    fn generalized_barnett_depends_on_class_mod_f(f in unipoly(1, 3), g in unipoly(0, 3), h in unipoly(0, 2)) {
        let shifted = g.add(&h.mul(&f));
        let a = generalized_barnett(&f, &g).unwrap();
        let b = generalized_barnett(&f, &shifted).unwrap();
        prop_assert!(rel_err(&a, &b) < 1e-8);
    }

    #[test]
    fn barnett_matrix_annihilates_f(f in unipoly(1, 6)) {
        let x = barnett(&f).unwrap();
        let scale: f64 = f.coeffs().iter().enumerate().map(|(k, a)| a.norm() * x.norm_fro().max(1.0).powi(k as i32)).sum();
        prop_assert!(f.eval_matrix(&x).max_abs() <= 1e-12 * scale);
    }

    #[test]
    fn univariate_bezoutian_is_symmetric(f in unipoly(1, 6)) {
        let d = f.degree().unwrap();
        let b = bezout_matrix_1d(&f, &UniPoly::monomial(0), d).unwrap();
        prop_assert_eq!(b.transpose(), b);
    }

    #[test]
    fn divided_difference_identity(
        (f, j, x, y) in (1usize..=3).prop_flat_map(|n| (multipoly(n, 3), 0..n, point(n), point(n))),
        g in 0u32..3,
    ) {
        let n = f.nvars();
        let dd = divided_difference(&f, j, g);
        let xy: Vec<C64> = x.iter().chain(&y).copied().collect();
        let mixed = |upto: usize| -> Vec<C64> { (0..n).map(|k| if k < upto { y[k] } else { x[k] }).collect() };
        let lhs = (x[j] - y[j]) * dd.eval(&xy);
        let rhs = y[j].powu(g) * f.eval(&mixed(j)) - x[j].powu(g) * f.eval(&mixed(j + 1));
        let scale = f.max_coeff().max(1.0) * 50.0;
        prop_assert!((lhs - rhs).norm() <= 1e-11 * scale, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn interpolation_inverts_evaluation(sys in int_system()) {
        let grid = FourierGrid::new(sys.multidegree()).unwrap();
        let (fu, fv) = (grid.fu(), grid.fv());
        for k in 0..=sys.nvars() {
            let vals = evaluation_matrix(&sys, &grid, k).unwrap();
            let b = interpolate(&grid, &vals);
            let again = fu.matmul(&b).matmul(&fv.transpose());
            prop_assert!(again.sub(&vals).max_abs() <= 1e-9 * vals.max_abs().max(1.0));
        }
    }

    #[test]
    fn fourier_family_equals_symbolic(sys in int_system()) {
        let num = build_family(&sys).unwrap();
        let sym = symbolic_family(&sys).unwrap();
        prop_assert_eq!(&num.row_labels, &sym.row_labels);
        prop_assert_eq!(&num.col_labels, &sym.col_labels);
        for (a, b) in num.matrices.iter().zip(&sym.matrices) {
            prop_assert!(a.sub(b).max_abs() <= 1e-9 * b.max_abs().max(1.0));
        }
    }

    #[test]
    fn block_form_is_upper_triangular(
        (r, cols, entries) in (1usize..12, 1usize..12)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(prop_oneof![3 => Just(0.0), 1 => -2.0f64..2.0], r * c)))
    ) {
        let m = CMatrix::from_fn(r, cols, |i, j| c(entries[i * cols + j]));
        let bt = block_triangularize(&m, 1e-8);
        let mut rp = bt.row_perm.clone();
        rp.sort_unstable();
        prop_assert_eq!(rp, (0..r).collect::<Vec<_>>());
        let mut cp = bt.col_perm.clone();
        cp.sort_unstable();
        prop_assert_eq!(cp, (0..cols).collect::<Vec<_>>());
        prop_assert_eq!(bt.row_blocks.len(), bt.col_blocks.len());
        let block_of = |ranges: &[std::ops::Range<usize>], k: usize| ranges.iter().position(|b| b.contains(&k));
        let p = bt.apply(&m);
        let cut = 1e-8 * m.max_abs();
        for i in 0..r {
            for j in 0..cols {
                if p[(i, j)].norm() <= cut {
                    continue;
                }
                let (bi, bj) = (block_of(&bt.row_blocks, i), block_of(&bt.col_blocks, j));
                prop_assert!(bi.is_some() && bj.is_some(), "uncovered nonzero at ({}, {})", i, j);
                prop_assert!(bi <= bj, "nonzero below the block diagonal at ({}, {})", i, j);
            }
        }
    }
}
