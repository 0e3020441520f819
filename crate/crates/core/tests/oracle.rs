mod common;

use blockexp::oracle::big::{big, to_f64};
use blockexp::oracle::{block_upper, digits_to_bits, expm_ref, expm_ref_f64, lexp_ref, lexp_ref_all, phi_ref, BigMatrix};
use blockexp::Mat;
use common::*;

fn rel_big(a: &BigMatrix, b: &BigMatrix) -> f64 {
    a.sub(b).norm_inf_f64() / b.norm_inf_f64()
}

/// `(f(A), f(B), L_f(A, B, E))` for a polynomial `f` with coefficients in
/// ascending order, by Horner's rule on the block matrix.
fn poly_block(coeffs: &[f64], a: &BigMatrix, b: &BigMatrix, e: &BigMatrix) -> (BigMatrix, BigMatrix, BigMatrix) {
    let (n, d, bits) = (a.rows(), b.rows(), a.bits());
    let m = block_upper(a, b, e);
    let mut acc = BigMatrix::zeros(n + d, n + d, bits);
    for &c in coeffs.iter().rev() {
        acc = m.mul(&acc);
        acc.add_diag(&big(c, bits));
    }
    (acc.block(0, 0, n, n), acc.block(n, n, d, d), acc.block(0, n, n, d))
}

#[test]
fn expm_ref_examples() {
    assert_eq!(expm_ref_f64(&Mat::zeros(3, 3), 50).to_f64(), Mat::identity(3));
    let nil = Mat::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
    assert_eq!(expm_ref_f64(&nil, 50).to_f64(), Mat::from_rows(&[[1.0, 1.0], [0.0, 1.0]]));
    let f = expm_ref_f64(&Mat::from_rows(&[[1.0, 0.0], [0.0, 2.0]]), 80).to_f64();
    assert_eq!((f[(0, 0)], f[(1, 1)], f[(0, 1)]), (1f64.exp(), 2f64.exp(), 0.0));
}

#[test]
fn precision_doubling_converges() {
    let mut r = rng(8);
    let m = randn(&mut r, 4, 4).scale(2.0);
    let lo = expm_ref_f64(&m, 50);
    let hi = expm_ref_f64(&m, 100);
    let bits = hi.bits();
    let lo = BigMatrix::from_f64(&Mat::zeros(4, 4), bits).add(&lo);
    assert!(rel_big(&lo, &hi) < 1e-50);
}

#[test]
fn lexp_ref_examples() {
    let mut r = rng(2);
    let (a, b) = (randn(&mut r, 3, 3), randn(&mut r, 2, 2));
    assert_eq!(lexp_ref(&a, &b, &Mat::zeros(3, 2), 50).to_f64(), Mat::zeros(3, 2));
    let d = lexp_ref(&Mat::scalar(1.0), &Mat::scalar(-1.0), &Mat::scalar(1.0), 60).to_f64();
    assert_eq!(d[(0, 0)], 1f64.sinh());
}

#[test]
fn sylvester_relation_holds() {
    let mut r = rng(4);
    let (a, b, e) = (randn(&mut r, 4, 4), randn(&mut r, 3, 3), randn(&mut r, 4, 3));
    let (x, y, d) = lexp_ref_all(&a, &b, &e, 100);
    let bits = d.bits();
    let (ab, bb, eb) = (
        BigMatrix::from_f64(&a, bits),
        BigMatrix::from_f64(&b, bits),
        BigMatrix::from_f64(&e, bits),
    );
    let lhs = ab.mul(&d).sub(&d.mul(&bb));
    let rhs = x.mul(&eb).sub(&eb.mul(&y));
    assert!(rel_big(&lhs, &rhs) < 1e-90);
}

#[test]
fn same_blocks_give_frechet_derivative() {
    // Central difference with h = 2^-140 has truncation error of order h^2.
    let mut r = rng(6);
    let (a, e) = (randn(&mut r, 3, 3), randn(&mut r, 3, 3));
    let digits = 100;
    let l = lexp_ref(&a, &a, &e, digits);
    let bits = l.bits() + 300;
    let (ab, eb) = (BigMatrix::from_f64(&a, bits), BigMatrix::from_f64(&e, bits));
    let h = -140;
    let plus = expm_ref(&ab.add(&eb.ldexp(h)), digits + 90);
    let minus = expm_ref(&ab.sub(&eb.ldexp(h)), digits + 90);
    let fd = plus.sub(&minus).ldexp(-h - 1);
    assert!(rel_big(&fd, &l) < 1e-70, "{:e}", rel_big(&fd, &l));
}

#[test]
fn polynomial_rules() {
    let mut r = rng(10);
    let bits = digits_to_bits(60);
    let to_big = |m: &Mat<f64>| BigMatrix::from_f64(m, bits);
    let (a, b, e) = (
        to_big(&randn(&mut r, 3, 3)),
        to_big(&randn(&mut r, 3, 3)),
        to_big(&randn(&mut r, 3, 3)),
    );
    let f = [0.5, -1.0, 0.25, 2.0];
    let g = [1.0, 0.0, -0.5];
    let (fa, _, lf) = poly_block(&f, &a, &b, &e);
    let (ga, gb, lg) = poly_block(&g, &a, &b, &e);

    let sum: Vec<f64> = (0..4).map(|k| f[k] + g.get(k).copied().unwrap_or(0.0)).collect();
    let (_, _, lsum) = poly_block(&sum, &a, &b, &e);
    assert!(rel_big(&lsum, &lf.add(&lg)) < 1e-55);

    let mut prod = vec![0.0; f.len() + g.len() - 1];
    for (i, fi) in f.iter().enumerate() {
        for (j, gj) in g.iter().enumerate() {
            prod[i + j] += fi * gj;
        }
    }
    let (_, _, lprod) = poly_block(&prod, &a, &b, &e);
    let rule = lf.mul(&gb).add(&fa.mul(&lg));
    assert!(rel_big(&lprod, &rule) < 1e-55);

    // f(g(z)), expanded.
    let g2 = [1.0, 0.0, -1.0, 0.0, 0.25];
    let g3 = [1.0, 0.0, -1.5, 0.0, 0.75, 0.0, -0.125];
    let mut comp = vec![0.0; 7];
    for (k, c) in [(0, f[0]), (1, f[1]), (2, f[2]), (3, f[3])] {
        let pw: &[f64] = match k {
            0 => &[1.0],
            1 => &g,
            2 => &g2,
            _ => &g3,
        };
        for (i, p) in pw.iter().enumerate() {
            comp[i] += c * p;
        }
    }
    let (_, _, lcomp) = poly_block(&comp, &a, &b, &e);
    let (_, _, chain) = poly_block(&f, &ga, &gb, &lg);
    assert!(rel_big(&lcomp, &chain) < 1e-55);
}

#[test]
fn orthogonal_similarity_exact() {
    let mut r = rng(12);
    let (a, b, e) = (randn(&mut r, 3, 3), randn(&mut r, 2, 2), randn(&mut r, 3, 2));
    let (p1, p2) = (orthogonal(&mut r, 3), orthogonal(&mut r, 2));
    let d = lexp_ref(&a, &b, &e, 80);
    let bits = d.bits();
    let big_m = |m: &Mat<f64>| BigMatrix::from_f64(m, bits);
    let (bp1, bp2) = (big_m(&p1), big_m(&p2));
    let at = bp1.transpose().mul(&big_m(&a)).mul(&bp1);
    let bt = bp2.transpose().mul(&big_m(&b)).mul(&bp2);
    let et = bp1.transpose().mul(&big_m(&e)).mul(&bp2);
    let f = expm_ref(&block_upper(&at, &bt, &et), 80);
    let dt = f.block(0, 3, 3, 2);
    // P1, P2 are orthogonal only to double precision.
    let back = bp1.mul(&dt).mul(&bp2.transpose());
    assert!(rel_big(&back, &d) < 1e-14);
}

#[test]
fn phi_examples() {
    for (j, want) in [(0, 1.0), (1, 1.0), (2, 0.5), (3, 1.0 / 6.0)] {
        assert_eq!(phi_ref(&Mat::scalar(0.0), j, 50).to_f64()[(0, 0)], want);
    }
    let p = phi_ref(&Mat::scalar(1.0), 1, 60);
    let exact = big(1.0, p.bits()).exp() - big(1.0, p.bits());
    assert!(to_f64(&(p.get(0, 0) - &exact)).abs() < 1e-55);
    let nil = Mat::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
    assert_eq!(phi_ref(&nil, 1, 50).to_f64(), Mat::from_rows(&[[1.0, 0.5], [0.0, 1.0]]));
}

#[test]
fn phi_recurrence() {
    // phi_j(A) = A phi_(j+1)(A) + I/j!, on both sides of the norm switch.
    let mut r = rng(14);
    for scale in [0.2, 3.0] {
        let a = randn(&mut r, 3, 3).scale(scale);
        let p1 = phi_ref(&a, 1, 60);
        let p2 = phi_ref(&a, 2, 60);
        let bits = p1.bits().min(p2.bits());
        let mut rhs = BigMatrix::from_f64(&a, bits).mul(&p2);
        rhs.add_diag(&big(1.0, bits));
        assert!(rel_big(&p1, &rhs) < 1e-50, "scale {scale}");
    }
}
