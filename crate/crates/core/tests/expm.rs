mod common;

use blockexp::densela::{gemm_sequential, matmul};
use blockexp::expm::{
    block_embed, expm_block_tri, select_params, squaring_phase, ExpmOptions, ReplacementContext, SchurPolicy, TriangularDiag, ELL_TABLE,
};
use blockexp::oracle::{expm_ref_f64, lexp_ref_all, lexp_ref_complex, rel_err};
use blockexp::{Error, Mat, MatmulCounter};
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn with_norm(m: Mat<f64>, target: f64) -> Mat<f64> {
    let n = m.norm_inf();
    m.scale(target / n)
}

#[test]
fn zero_triple() {
    for (n, d) in [(1, 1), (3, 2), (2, 5)] {
        let res = expm_block_tri(
            &Mat::<f64>::zeros(n, n),
            &Mat::zeros(d, d),
            &Mat::zeros(n, d),
            &ExpmOptions::default(),
        )
        .unwrap();
        assert_eq!((res.x, res.y, res.d), (Mat::identity(n), Mat::identity(d), Mat::zeros(n, d)));
        assert_eq!((res.m, res.s), (3, 0));
    }
}

#[test]
fn scalar_divided_difference() {
    let res = expm_block_tri(&Mat::scalar(1.0), &Mat::scalar(-1.0), &Mat::scalar(2.0), &ExpmOptions::default()).unwrap();
    let exact = 2.0 * 1f64.sinh();
    assert!((res.d[(0, 0)] - exact).abs() <= 1e-15 * exact);
    assert!((res.x[(0, 0)] - 1f64.exp()).abs() <= 2.0 * U * 1f64.exp());
}

#[test]
fn select_params_examples() {
    assert_eq!(select_params(0.0, 0.0, &ELL_TABLE).unwrap(), (3, 0));
    assert_eq!(select_params(4.74, 1.0, &ELL_TABLE).unwrap(), (13, 0));
    assert_eq!(select_params(0.5, 4.85e3, &ELL_TABLE).unwrap(), (13, 10));
    assert!(matches!(select_params(f64::NAN, 1.0, &ELL_TABLE), Err(Error::NonFinite)));
    assert!(matches!(select_params(1.0, f64::INFINITY, &ELL_TABLE), Err(Error::NonFinite)));
}

#[test]
fn schur_pathway_triggers_at_threshold() {
    let mut r = rng(41);
    let a = with_norm(randn(&mut r, 6, 6), 4.85e3);
    let b = randn(&mut r, 4, 4);
    let e = randn(&mut r, 6, 4);
    let res = expm_block_tri(&a, &b, &e, &ExpmOptions::default()).unwrap();
    assert_eq!((res.m, res.s, res.used_schur), (13, 10, true));
    let below = expm_block_tri(&with_norm(a, 2.4e3), &b, &e, &ExpmOptions::default()).unwrap();
    assert_eq!((below.s, below.used_schur), (9, false));
}

#[test]
fn selection_ignores_e() {
    let mut r = rng(5);
    for _ in 0..5 {
        let na = uniform(&mut r, 1, 1, 10.0, 100.0)[(0, 0)];
        let nb = uniform(&mut r, 1, 1, 10.0, 100.0)[(0, 0)];
        let a = with_norm(randn(&mut r, 8, 8), na);
        let b = with_norm(randn(&mut r, 8, 8), nb);
        let e = with_norm(randn(&mut r, 8, 8), 1.0);
        let opts = ExpmOptions::default();
        let small = expm_block_tri(&a, &b, &e, &opts).unwrap();
        let large = expm_block_tri(&a, &b, &e.scale(1e10), &opts).unwrap();
        assert_eq!((small.m, small.s), (large.m, large.s));
        assert_eq!(small.matmuls, large.matmuls);
    }
}

#[test]
fn oracle_agreement_random_triples() {
    let mut r = rng(2024);
    for _ in 0..12 {
        let n = r.random_range(1..=10);
        let d = r.random_range(1..=10);
        let (a, b, e) = (randn(&mut r, n, n), randn(&mut r, d, d), randn(&mut r, n, d));
        let res = expm_block_tri(&a, &b, &e, &ExpmOptions::default()).unwrap();
        let (xr, yr, dr) = lexp_ref_all(&a, &b, &e, 100);
        assert!(rel_err(&res.x, &xr) <= 1e-13, "X n={n}");
        assert!(rel_err(&res.y, &yr) <= 1e-13, "Y d={d}");
        assert!(rel_err(&res.d, &dr) <= 1e-13, "D n={n} d={d}");
        assert!(!res.overflow);
    }
}

#[test]
fn block_embedding_baseline_agrees() {
    let mut r = rng(77);
    let (a, b, e) = (randn(&mut r, 5, 5), randn(&mut r, 4, 4), randn(&mut r, 5, 4));
    let res = block_embed(&a, &b, &e).unwrap();
    let (xr, yr, dr) = lexp_ref_all(&a, &b, &e, 100);
    assert!(rel_err(&res.x, &xr) <= 1e-13 && rel_err(&res.y, &yr) <= 1e-13 && rel_err(&res.d, &dr) <= 1e-13);
}

#[test]
fn schur_policy_always_matches_oracle() {
    let mut r = rng(9);
    let (a, b, e) = (randn(&mut r, 7, 7).scale(3.0), randn(&mut r, 5, 5).scale(3.0), randn(&mut r, 7, 5));
    let opts = ExpmOptions {
        schur: SchurPolicy::Always,
        ..Default::default()
    };
    let res = expm_block_tri(&a, &b, &e, &opts).unwrap();
    assert!(res.used_schur);
    let (xr, yr, dr) = lexp_ref_all(&a, &b, &e, 100);
    assert!(rel_err(&res.x, &xr) <= 1e-12 && rel_err(&res.y, &yr) <= 1e-12 && rel_err(&res.d, &dr) <= 1e-12);
}

fn rotation_pair(sigma: f64, omega: f64) -> Mat<f64> {
    Mat::from_rows(&[[sigma, omega], [-omega, sigma]])
}

#[test]
fn large_norm_schur_path_matches_oracle() {
    // Normal with eigenvalues far up the imaginary axis: ||A|| triggers s >= 10
    // while e^A stays of unit size.
    let mut r = rng(13);
    let q = orthogonal(&mut r, 4);
    let mut core = Mat::zeros(4, 4);
    core.set_block(0, 0, &rotation_pair(-0.5, 3000.0));
    core.set_block(2, 2, &rotation_pair(0.25, 2200.0));
    let a = mul(&mul(&q, &core), &q.transpose());
    let b = rotation_pair(0.1, 4900.0);
    let e = randn(&mut r, 4, 2);
    let res = expm_block_tri(&a, &b, &e, &ExpmOptions::default()).unwrap();
    assert!(res.used_schur && res.s >= 10);
    let (xr, yr, dr) = lexp_ref_all(&a, &b, &e, 100);
    // Perturbations of size u ||A|| are amplified by up to ||A|| here.
    let tol = 20.0 * U * a.norm_inf();
    for (got, want) in [(&res.x, &xr), (&res.y, &yr), (&res.d, &dr)] {
        let err = rel_err(got, want);
        assert!(err <= tol, "{err:e} > {tol:e}");
    }
}

#[test]
fn cost_model() {
    let mut r = rng(3);
    for s in 1..=3u32 {
        let eta = ELL_TABLE.ell(13).unwrap() * 2f64.powi(s as i32) * 0.9;
        let a = with_norm(randn(&mut r, 6, 6), eta);
        let b = with_norm(randn(&mut r, 5, 5), 1.0);
        let e = randn(&mut r, 6, 5);
        let res = expm_block_tri(&a, &b, &e, &ExpmOptions::default()).unwrap();
        assert_eq!((res.m, res.s, res.used_schur), (13, s, false));
        assert_eq!(res.matmuls, 25 + 4 * s as usize);
    }
}

#[test]
fn triangular_replacement_makes_diagonal_exact() {
    let mut r = rng(21);
    let a = upper_triangular(&mut r, 4, -4.0, 4.0).scale(5.0);
    let b = upper_triangular(&mut r, 4, -4.0, 4.0).scale(5.0);
    let e = randn(&mut r, 4, 4);
    let res = expm_block_tri(&a, &b, &e, &ExpmOptions::default()).unwrap();
    assert!(res.s > 0);
    for i in 0..4 {
        let (xa, xb) = (a[(i, i)].exp(), b[(i, i)].exp());
        assert!((res.x[(i, i)] - xa).abs() <= 2.0 * U * xa);
        assert!((res.y[(i, i)] - xb).abs() <= 2.0 * U * xb);
    }
}

#[test]
fn lower_triangular_blocks_get_exact_diagonals() {
    let mut r = rng(22);
    let a = upper_triangular(&mut r, 4, -4.0, 4.0).scale(5.0);
    let b = upper_triangular(&mut r, 3, -4.0, 4.0).scale(5.0).transpose();
    let e = randn(&mut r, 4, 3);
    for schur in [SchurPolicy::Auto, SchurPolicy::Always, SchurPolicy::Never] {
        let res = expm_block_tri(
            &a,
            &b,
            &e,
            &ExpmOptions {
                schur,
                ..Default::default()
            },
        )
        .unwrap();
        for i in 0..3 {
            let xb = b[(i, i)].exp();
            assert!((res.y[(i, i)] - xb).abs() <= 2.0 * U * xb);
        }
        assert!(res.y.transpose().is_upper_triangular());
        let (_, y, d) = lexp_ref_all(&a, &b, &e, 60);
        assert!(rel_err(&res.y, &y) <= 1e-13 && rel_err(&res.d, &d) <= 1e-13);
    }
}

#[test]
fn squaring_chain_rule() {
    let mut r = rng(31);
    for s in 0..=4u32 {
        let (x0, y0, d0) = (randn(&mut r, 3, 3).scale(0.5), randn(&mut r, 3, 3).scale(0.5), randn(&mut r, 3, 3));
        let out = squaring_phase(
            x0.clone(),
            y0.clone(),
            d0.clone(),
            s,
            &ReplacementContext::none(),
            &MatmulCounter::new(),
        )
        .unwrap();
        let mut p = Mat::block_upper(&x0, &y0, &d0);
        for _ in 0..s {
            p = gemm_sequential(&p, &p);
        }
        let want = p.block(0, 3, 3, 3);
        assert!(
            (&out.d - &want).norm_inf() <= 100.0 * U * want.norm_inf().max(d0.norm_inf()),
            "s={s}"
        );
    }
}

#[test]
fn replacement_context_from_triangular() {
    let t = Mat::from_rows(&[[0.5, 1.0, 0.0], [0.0, -0.25, 2.0], [0.0, 0.0, 1.0]]);
    let ctx = ReplacementContext {
        a: TriangularDiag::detect(&t),
        b: None,
    };
    let x0 = expm_ref_f64(&t.scale(0.25), 50).to_f64();
    let out = squaring_phase(x0, Mat::identity(1), Mat::zeros(3, 1), 2, &ctx, &MatmulCounter::new()).unwrap();
    for i in 0..3 {
        assert_eq!(out.x[(i, i)], t[(i, i)].exp());
    }
    let exact = expm_ref_f64(&t, 50).to_f64();
    assert!(rel_diff(&out.x, &exact) <= 10.0 * U);
}

#[test]
fn complex_inputs_match_oracle() {
    let mut r = rng(55);
    let (a, b, e) = (
        randn_complex(&mut r, 4, 4),
        randn_complex(&mut r, 3, 3),
        randn_complex(&mut r, 4, 3),
    );
    let res = expm_block_tri(&a, &b, &e, &ExpmOptions::default()).unwrap();
    let (re, im) = lexp_ref_complex(&a, &b, &e, 60);
    let (re, im) = (re.to_f64(), im.to_f64());
    let exact = Mat::from_fn(4, 3, |i, j| Complex64::new(re[(i, j)], im[(i, j)]));
    assert!(rel_diff(&res.d, &exact) <= 1e-13);
    let forced = expm_block_tri(
        &a,
        &b,
        &e,
        &ExpmOptions {
            schur: SchurPolicy::Always,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(rel_diff(&forced.d, &exact) <= 1e-12);
}

#[test]
fn empty_blocks() {
    let mut r = rng(1);
    let a = randn(&mut r, 3, 3);
    let res = expm_block_tri(&a, &Mat::zeros(0, 0), &Mat::zeros(3, 0), &ExpmOptions::default()).unwrap();
    assert_eq!(res.d.shape(), (3, 0));
    assert!(rel_err(&res.x, &expm_ref_f64(&a, 50)) <= 1e-14);
    let res = expm_block_tri(
        &Mat::<f64>::zeros(0, 0),
        &Mat::zeros(0, 0),
        &Mat::zeros(0, 0),
        &ExpmOptions::default(),
    )
    .unwrap();
    assert_eq!(res.x.shape(), (0, 0));
}

#[test]
fn rejects_bad_input() {
    let err = expm_block_tri(
        &Mat::scalar(f64::NAN),
        &Mat::scalar(0.0),
        &Mat::scalar(1.0),
        &ExpmOptions::default(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::NonFinite));
    let err = expm_block_tri(
        &Mat::<f64>::zeros(2, 2),
        &Mat::zeros(3, 3),
        &Mat::zeros(3, 2),
        &ExpmOptions::default(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::DimensionMismatch { .. }));
}

#[test]
fn overflow_is_flagged() {
    let res = expm_block_tri(&Mat::scalar(800.0), &Mat::scalar(1.0), &Mat::scalar(1.0), &ExpmOptions::default()).unwrap();
    assert!(res.overflow);
    assert!(res.x[(0, 0)].is_infinite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn selection_structure(na in 0.0f64..1e6, nb in 0.0f64..1e6) {
        let (m, s) = select_params(na, nb, &ELL_TABLE).unwrap();
        let eta = na.max(nb);
        if s > 0 {
            prop_assert_eq!(m, 13);
            prop_assert!(eta / 2f64.powi(s as i32) <= ELL_TABLE.ell(13).unwrap());
            prop_assert!(eta / 2f64.powi(s as i32 - 1) > ELL_TABLE.ell(13).unwrap());
        } else {
            prop_assert!(eta <= ELL_TABLE.ell(m).unwrap());
        }
    }

    #[test]
    fn power_of_two_linearity(seed in any::<u64>(), scale in 0.1f64..30.0) {
        let mut r = rng(seed);
        let (a, b, e) = (randn(&mut r, 5, 5).scale(scale), randn(&mut r, 4, 4), randn(&mut r, 5, 4));
        let opts = ExpmOptions::default();
        let d = expm_block_tri(&a, &b, &e, &opts).unwrap().d;
        for k in [-200, 0, 200] {
            let dk = expm_block_tri(&a, &b, &e.scale(2f64.powi(k)), &opts).unwrap().d;
            prop_assert_eq!(dk, d.scale(2f64.powi(k)));
        }
    }

    #[test]
    fn additivity_in_e(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (randn(&mut r, 5, 5).scale(2.0), randn(&mut r, 3, 3).scale(2.0));
        let (e1, e2) = (randn(&mut r, 5, 3), randn(&mut r, 5, 3));
        let opts = ExpmOptions::default();
        let d1 = expm_block_tri(&a, &b, &e1, &opts).unwrap().d;
        let d2 = expm_block_tri(&a, &b, &e2, &opts).unwrap().d;
        let d12 = expm_block_tri(&a, &b, &(&e1 + &e2), &opts).unwrap().d;
        prop_assert!((&d12 - &(&d1 + &d2)).norm_inf() <= 50.0 * U * (d1.norm_inf() + d2.norm_inf()));
    }

    // Signed permutations keep the transformed triple exact, so only the
    // algorithm's own rounding is measured.
    #[test]
    fn orthogonal_similarity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, e) = (randn(&mut r, 5, 5), randn(&mut r, 4, 4), randn(&mut r, 5, 4));
        let (p1, p2) = (signed_permutation(&mut r, 5), signed_permutation(&mut r, 4));
        let opts = ExpmOptions::default();
        let d = expm_block_tri(&a, &b, &e, &opts).unwrap().d;
        let at = mul(&mul(&p1.transpose(), &a), &p1);
        let bt = mul(&mul(&p2.transpose(), &b), &p2);
        let et = mul(&mul(&p1.transpose(), &e), &p2);
        let dt = expm_block_tri(&at, &bt, &et, &opts).unwrap().d;
        let back = mul(&mul(&p1, &dt), &p2.transpose());
        prop_assert!(rel_diff(&back, &d) <= 100.0 * U, "{:e}", rel_diff(&back, &d));
    }

    // The transposed problem reads ||B||_1 where the direct one reads ||B||_inf
    // and splits M_6 differently, so the two runs round independently. Their
    // gap is bounded by the sum of the two forward errors.
    #[test]
    fn transposed_problem(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, e) = (randn(&mut r, 4, 4), randn(&mut r, 3, 3), randn(&mut r, 4, 3));
        let opts = ExpmOptions::default();
        let d = expm_block_tri(&a, &b, &e, &opts).unwrap().d;
        let dt = expm_block_tri(&b.transpose(), &a.transpose(), &e.transpose(), &opts).unwrap().d;
        let exact = lexp_ref_all(&a, &b, &e, 50).2;
        let (err, err_t) = (rel_err(&d, &exact), rel_err(&dt.transpose(), &exact));
        prop_assert!(err <= 32.0 * U && err_t <= 32.0 * U, "{err:e} {err_t:e}");
        prop_assert!(rel_diff(&dt.transpose(), &d) <= 64.0 * U);
    }
}

#[test]
fn matmul_counter_is_per_call() {
    let ctr = MatmulCounter::new();
    let m = Mat::scalar(2.0);
    matmul(&m, &m, &ctr).unwrap();
    let res = expm_block_tri(&m, &m, &m, &ExpmOptions::default()).unwrap();
    assert_eq!(ctr.get(), 1);
    assert!(res.matmuls > 0);
}

#[test]
fn ell_table_invariants() {
    let t = &ELL_TABLE;
    for i in 0..5 {
        assert!(t.ell[i] > 0.0 && t.ell[i] < t.theta[i]);
        if i > 0 {
            assert!(t.ell[i] > t.ell[i - 1]);
        }
    }
    let l13 = t.ell(13).unwrap();
    assert!((4.64..=4.84).contains(&l13));
    assert!((1024.0 * l13 / 4.85e3 - 1.0).abs() < 0.01);
}
