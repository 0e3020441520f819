mod common;

use blockexp::apps::{
    hamiltonian_exp, jordan_zero, nested_sequence, phi_combination, symplectic_form, triangular_expm_partitioned, NestedLevel,
};
use blockexp::expm::{expm_block_tri, ExpmOptions};
use blockexp::oracle::{expm_ref_f64, phi_ref, rel_err};
use blockexp::{Error, Mat};
use common::*;
use proptest::prelude::*;

fn col(m: &Mat<f64>, v: &[f64]) -> Vec<f64> {
    let x = Mat::from_col_major(v.len(), 1, v.to_vec()).unwrap();
    mul(m, &x).into_vec()
}

fn vec_rel(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let den = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
    num / den
}

/// Stable upper triangular matrix: negative diagonal, unit-size coupling.
fn stable_tri(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Mat<f64> {
    let mut t = upper_triangular(r, n, -1.0, 1.0);
    for i in 0..n {
        t[(i, i)] = -0.5 - t[(i, i)].abs();
    }
    t
}

#[test]
fn jordan_block() {
    assert_eq!(
        jordan_zero::<f64>(3),
        Mat::from_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    );
}

#[test]
fn phi_combination_examples() {
    let z = Mat::scalar(0.0);
    assert_eq!(phi_combination(&z, &[vec![1.0], vec![1.0], vec![1.0]]).unwrap(), vec![2.5]);
    let v = phi_combination(&Mat::scalar(1.0), &[vec![0.0], vec![1.0]]).unwrap()[0];
    let exact = phi_ref(&Mat::scalar(1.0), 1, 50).to_f64()[(0, 0)];
    assert!((v - exact).abs() <= 1e-13 * exact);
    assert!((v - 1.7182818285).abs() < 1e-10);
}

#[test]
fn phi_combination_reduces_to_exponential() {
    let mut r = rng(1);
    let a = randn(&mut r, 4, 4);
    let w0: Vec<f64> = randn(&mut r, 4, 1).into_vec();
    let ea = expm_ref_f64(&a, 50).to_f64();
    let want = col(&ea, &w0);
    assert!(vec_rel(&phi_combination(&a, std::slice::from_ref(&w0)).unwrap(), &want) <= 1e-14);
    let zeros = vec![0.0; 4];
    let got = phi_combination(&a, &[w0, zeros.clone(), zeros]).unwrap();
    assert!(vec_rel(&got, &want) <= 1e-14);
}

#[test]
fn phi_combination_matches_oracle_sum() {
    let mut r = rng(2);
    let a = randn(&mut r, 5, 5);
    let w: Vec<Vec<f64>> = (0..4).map(|_| randn(&mut r, 5, 1).into_vec()).collect();
    let got = phi_combination(&a, &w).unwrap();
    let mut want = vec![0.0; 5];
    for (j, wj) in w.iter().enumerate() {
        for (o, x) in want.iter_mut().zip(col(&phi_ref(&a, j, 60).to_f64(), wj)) {
            *o += x;
        }
    }
    assert!(vec_rel(&got, &want) <= 1e-13);
}

#[test]
fn phi_combination_checks_lengths() {
    let err = phi_combination(&Mat::identity(2), &[vec![1.0, 2.0], vec![1.0]]).unwrap_err();
    assert!(matches!(err, Error::DimensionMismatch { .. }));
    assert!(phi_combination(&Mat::<f64>::identity(2), &[]).is_err());
}

#[test]
fn hamiltonian_blocks() {
    let mut r = rng(3);
    let n = 4;
    let t = stable_tri(&mut r, n);
    let g = randn(&mut r, n, n);
    let h = &g + &g.transpose();
    let res = hamiltonian_exp(&t, &h).unwrap();

    let mut full = Mat::zeros(2 * n, 2 * n);
    full.set_block(0, 0, &t);
    full.set_block(0, n, &h);
    full.set_block(n, n, &t.transpose().scale(-1.0));
    let exact = expm_ref_f64(&full, 60);
    assert!(rel_err(&res.assemble(), &exact) <= 1e-13);

    let f_inv_t = exact.to_f64().block(n, n, n, n);
    let kappa = res.f.norm_inf() * f_inv_t.transpose().norm_inf();
    assert!(rel_diff(&res.y, &f_inv_t) <= 100.0 * U * kappa);

    let mut j = Mat::zeros(2 * n, 2 * n);
    j.set_block(0, n, &Mat::identity(n));
    j.set_block(n, 0, &Mat::identity(n).scale(-1.0));
    assert!((&symplectic_form(&res.assemble()) - &j).max_abs() <= 1e-12);

    let zero = hamiltonian_exp(&t, &Mat::zeros(n, n)).unwrap();
    assert_eq!(zero.dh, Mat::zeros(n, n));
    assert!(rel_err(&zero.f, &expm_ref_f64(&t, 50)) <= 1e-14);
}

#[test]
fn hamiltonian_rejects_asymmetric() {
    let h = Mat::from_rows(&[[1.0, 2.0], [2.0 + 1e-6, 1.0]]);
    let err = hamiltonian_exp(&Mat::identity(2).scale(-1.0), &h).unwrap_err();
    assert!(matches!(err, Error::NotSymmetric { .. }));
    let nearly = Mat::from_rows(&[[1.0, 2.0], [2.0 + 4.0 * U, 1.0]]);
    assert!(hamiltonian_exp(&Mat::identity(2).scale(-1.0), &nearly).is_ok());
}

#[test]
fn nested_scalar_level() {
    let levels = [NestedLevel {
        e: Mat::scalar(1.0),
        g: Mat::scalar(-1.0),
    }];
    let f = nested_sequence(&Mat::scalar(1.0), &levels).unwrap();
    assert_eq!(f.len(), 2);
    assert!((f[1][(0, 1)] - 1f64.sinh()).abs() <= 2.0 * U * 1f64.sinh());
    assert_eq!(f[1][(1, 0)], 0.0);
}

#[test]
fn nested_two_random_levels() {
    let mut r = rng(4);
    let g00 = randn(&mut r, 2, 2);
    let levels = vec![
        NestedLevel {
            e: randn(&mut r, 2, 2),
            g: randn(&mut r, 2, 2),
        },
        NestedLevel {
            e: randn(&mut r, 4, 2),
            g: randn(&mut r, 2, 2),
        },
    ];
    let f = nested_sequence(&g00, &levels).unwrap();
    let g1 = Mat::block_upper(&g00, &levels[0].g, &levels[0].e);
    let g2 = Mat::block_upper(&g1, &levels[1].g, &levels[1].e);
    assert!(rel_err(&f[2], &expm_ref_f64(&g2, 60)) <= 1e-13);
    for (k, g) in [&g00, &levels[0].g, &levels[1].g].into_iter().enumerate() {
        let own = expm_block_tri(g, &Mat::zeros(0, 0), &Mat::zeros(2, 0), &ExpmOptions::default())
            .unwrap()
            .x;
        let blk = f[2].block(2 * k, 2 * k, 2, 2);
        assert!(rel_diff(&blk, &own) <= 100.0 * U);
    }
}

#[test]
fn nested_block_diagonal_when_uncoupled() {
    let mut r = rng(5);
    let g00 = randn(&mut r, 2, 2);
    let g11 = randn(&mut r, 3, 3);
    let f = nested_sequence(
        &g00,
        &[NestedLevel {
            e: Mat::zeros(2, 3),
            g: g11.clone(),
        }],
    )
    .unwrap();
    assert_eq!(f[1].block(0, 2, 2, 3), Mat::zeros(2, 3));
    assert!(rel_err(&f[1].block(2, 2, 3, 3), &expm_ref_f64(&g11, 50)) <= 1e-14);
}

#[test]
fn nested_dimension_mismatch() {
    let bad = [NestedLevel {
        e: Mat::zeros(3, 1),
        g: Mat::scalar(1.0),
    }];
    assert!(nested_sequence(&Mat::identity(2), &bad).is_err());
}

#[test]
fn partitioned_examples() {
    let d = triangular_expm_partitioned(&Mat::from_rows(&[[1.0, 0.0], [0.0, 2.0]])).unwrap();
    assert_eq!(d.k, 1);
    assert_eq!(d.f[(0, 1)], 0.0);
    // s = 0 here, so these are rational Padé values, not replaced diagonals.
    assert!((d.f[(0, 0)] - 1f64.exp()).abs() <= 4.0 * U * 1f64.exp());
    assert!((d.f[(1, 1)] - 2f64.exp()).abs() <= 4.0 * U * 2f64.exp());

    // Every split costs 3 here, so the tie goes to k = 1 and E_1 = 0.
    let t = Mat::from_fn(4, 4, |i, j| if i == j { [1.0, 2.0, 3.0, -1.0][i] } else { 0.0 });
    let res = triangular_expm_partitioned(&t).unwrap();
    assert_eq!(res.k, 1);
    assert_eq!(res.f.block(0, 1, 1, 3), Mat::zeros(1, 3));

    assert!(triangular_expm_partitioned(&Mat::scalar(1.0)).is_err());
    assert!(triangular_expm_partitioned(&Mat::from_rows(&[[1.0, 0.0], [1.0, 1.0]])).is_err());
}

#[test]
fn partitioned_random_triangular() {
    let mut r = rng(6);
    for _ in 0..5 {
        let t = upper_triangular(&mut r, 6, -1.0, 1.0);
        let res = triangular_expm_partitioned(&t).unwrap();
        assert!(rel_err(&res.f, &expm_ref_f64(&t, 60)) <= 1e-13);
        let cost = |k: usize| t.block(0, 0, k, k).norm_inf().max(t.block(k, k, 6 - k, 6 - k).norm_inf());
        assert!((1..6).all(|k| cost(res.k) < cost(k) || (cost(res.k) == cost(k) && res.k <= k)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn phi_combination_is_linear(seed in any::<u64>(), k in -60i32..60) {
        let mut r = rng(seed);
        let a = randn(&mut r, 3, 3);
        let w: Vec<Vec<f64>> = (0..3).map(|_| randn(&mut r, 3, 1).into_vec()).collect();
        let v: Vec<Vec<f64>> = (0..3).map(|_| randn(&mut r, 3, 1).into_vec()).collect();
        let f = 2f64.powi(k);
        let scaled: Vec<Vec<f64>> = w.iter().map(|x| x.iter().map(|y| y * f).collect()).collect();
        let base = phi_combination(&a, &w).unwrap();
        let got = phi_combination(&a, &scaled).unwrap();
        prop_assert_eq!(got, base.iter().map(|y| y * f).collect::<Vec<_>>());
        let sum: Vec<Vec<f64>> = w.iter().zip(&v).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect();
        let pv = phi_combination(&a, &v).unwrap();
        let ps = phi_combination(&a, &sum).unwrap();
        let expect: Vec<f64> = base.iter().zip(&pv).map(|(p, q)| p + q).collect();
        let scale = base.iter().chain(&pv).map(|x| x.abs()).fold(0.0, f64::max);
        prop_assert!(ps.iter().zip(&expect).all(|(p, q)| (p - q).abs() <= 50.0 * U * scale.max(1.0)));
    }

    #[test]
    fn partitioned_agrees_with_whole(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = upper_triangular(&mut r, 5, -2.0, 2.0);
        let whole = expm_block_tri(&t, &Mat::zeros(0, 0), &Mat::zeros(5, 0), &ExpmOptions::default()).unwrap().x;
        let part = triangular_expm_partitioned(&t).unwrap().f;
        let exact = expm_ref_f64(&t, 50);
        let (ew, ep) = (rel_err(&whole, &exact), rel_err(&part, &exact));
        prop_assert!(ep <= 100.0 * U && ew <= 100.0 * U, "{ep:e} {ew:e}");
    }
}
