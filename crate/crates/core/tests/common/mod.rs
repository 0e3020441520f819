#![allow(dead_code)]

use blockexp::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const U: f64 = blockexp::scalar::UNIT_ROUNDOFF;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn randn(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat<f64> {
    Mat::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Mat<f64> {
    Mat::from_fn(rows, cols, |_, _| rng.random_range(lo..hi))
}

pub fn randn_complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat<Complex64> {
    Mat::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random orthogonal matrix from modified Gram–Schmidt on a Gaussian matrix.
pub fn orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Mat<f64> {
    let mut q = randn(rng, n, n);
    for j in 0..n {
        for k in 0..j {
            let dot: f64 = (0..n).map(|i| q[(i, k)] * q[(i, j)]).sum();
            for i in 0..n {
                let v = q[(i, k)];
                q[(i, j)] -= dot * v;
            }
        }
        let nrm: f64 = (0..n).map(|i| q[(i, j)] * q[(i, j)]).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] /= nrm;
        }
    }
    q
}

pub fn upper_triangular(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Mat<f64> {
    let mut t = uniform(rng, n, n, lo, hi);
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = 0.0;
        }
    }
    t
}

pub fn mul(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
    blockexp::densela::gemm_sequential(a, b)
}

/// `||a - b||_inf / ||b||_inf`.
pub fn rel_diff<T: blockexp::Scalar>(a: &Mat<T>, b: &Mat<T>) -> f64 {
    let nb = b.norm_inf();
    let diff = (a - b).norm_inf();
    if nb == 0.0 {
        diff
    } else {
        diff / nb
    }
}

/// Random signed permutation: orthogonal, and products with it are exact.
pub fn signed_permutation(rng: &mut ChaCha8Rng, n: usize) -> Mat<f64> {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut p = Mat::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        p[(i, j)] = if rng.random::<bool>() { 1.0 } else { -1.0 };
    }
    p
}
