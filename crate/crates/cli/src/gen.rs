//! Seeded test matrices.

use blockexp::densela::schur_real;
use blockexp::Mat;
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Kind {
    Randn,
    StableTri,
    Symm,
    Chebspec,
    HamiltonianPair,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Randn => "randn",
            Self::StableTri => "stable-tri",
            Self::Symm => "symm",
            Self::Chebspec => "chebspec",
            Self::HamiltonianPair => "hamiltonian-pair",
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn randn(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat<f64> {
    Mat::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Standard normal upper triangle with the diagonal made negative.
pub fn stable_tri(rng: &mut ChaCha8Rng, n: usize) -> Mat<f64> {
    let mut t = randn(rng, n, n);
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = 0.0;
        }
        t[(j, j)] = -t[(j, j)].abs();
    }
    t
}

/// `(C + C^T) / 2`, symmetric bitwise.
pub fn symmetric_part(c: &Mat<f64>) -> Mat<f64> {
    let n = c.rows();
    Mat::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]))
}

/// Chebyshev spectral differentiation matrix on the `n + 1` points
/// `x_k = cos(k pi / n)`, evaluated as `sin(pi (n - 2k) / 2n)` so the points
/// are exactly symmetric, with the first row and column removed:
///
/// `C_ij = (-1)^(i+j) d_i / (d_j (x_i - x_j))` off the diagonal, `d_0 = d_n = 2`,
/// otherwise `d = 1`; `C_kk = -x_k / (2 (1 - x_k^2))` inside and
/// `C_nn = -(2n^2 + 1) / 6`.
pub fn chebspec(n: usize) -> Mat<f64> {
    let x: Vec<f64> = (0..=n)
        .map(|k| (std::f64::consts::PI * (n as f64 - 2.0 * k as f64) / (2.0 * n as f64)).sin())
        .collect();
    let d = |k: usize| if k == 0 || k == n { 2.0 } else { 1.0 };
    let nf = n as f64;
    Mat::from_fn(n, n, |r, c| {
        let (i, j) = (r + 1, c + 1);
        if i == j {
            if i == n {
                -(2.0 * nf * nf + 1.0) / 6.0
            } else {
                -x[i] / (2.0 * (1.0 - x[i] * x[i]))
            }
        } else {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            sign * d(i) / (d(j) * (x[i] - x[j]))
        }
    })
}

/// Involutory matrix (`A^2 = I`) built from the Hilbert matrix by row scaling.
pub fn invol(n: usize) -> Mat<f64> {
    let mut a = Mat::from_fn(n, n, |i, j| 1.0 / (i + j + 1) as f64);
    let mut d = -(n as f64);
    for i in 0..n {
        a[(i, 0)] *= d;
    }
    for i in 0..n.saturating_sub(1) {
        let k = (i + 1) as f64;
        let nf = n as f64;
        d = -(nf + k) * (nf - k) * d / (k * k);
        for j in 0..n {
            a[(i + 1, j)] *= d;
        }
    }
    a
}

/// `(T, H)`: `T` the real Schur factor of `invol(n)` with its positive
/// diagonal entries negated, `H` the symmetric part of `chebspec(n)`.
pub fn hamiltonian_pair(n: usize) -> Result<(Mat<f64>, Mat<f64>)> {
    let mut t = schur_real(&invol(n))?.t;
    for i in 0..n {
        if t[(i, i)] > 0.0 {
            t[(i, i)] = -t[(i, i)];
        }
    }
    Ok((t, symmetric_part(&chebspec(n))))
}

/// One matrix of the given kind.
pub fn generate(kind: Kind, n: usize, seed: u64) -> Result<Mat<f64>> {
    if n == 0 {
        return Err(CliError::Usage("matrix order must be at least 1".into()));
    }
    let mut r = rng(seed);
    Ok(match kind {
        Kind::Randn => randn(&mut r, n, n),
        Kind::StableTri => stable_tri(&mut r, n),
        Kind::Symm => symmetric_part(&randn(&mut r, n, n)),
        Kind::Chebspec => chebspec(n),
        Kind::HamiltonianPair => return Err(CliError::Usage("hamiltonian-pair produces two matrices; use generate_pair".into())),
    })
}

pub fn generate_pair(n: usize) -> Result<(Mat<f64>, Mat<f64>)> {
    if n == 0 {
        return Err(CliError::Usage("matrix order must be at least 1".into()));
    }
    hamiltonian_pair(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebspec_order_two() {
        assert_eq!(chebspec(2), Mat::from_rows(&[[0.0, -0.5], [2.0, -1.5]]));
    }

    #[test]
    fn invol_is_involutory() {
        let a = invol(5);
        let sq = blockexp::densela::gemm_sequential(&a, &a);
        let err = (&sq - &Mat::identity(5)).max_abs();
        assert!(err < 1e-6 * a.norm_inf() * a.norm_inf(), "{err:e}");
    }

    #[test]
    fn generators() {
        let t = generate(Kind::StableTri, 6, 1).unwrap();
        assert!(t.is_upper_triangular() && (0..6).all(|i| t[(i, i)] < 0.0));
        let s = generate(Kind::Symm, 5, 2).unwrap();
        assert_eq!(s, s.transpose());
        assert_eq!(generate(Kind::Randn, 3, 9).unwrap(), generate(Kind::Randn, 3, 9).unwrap());
        assert!(generate(Kind::Randn, 0, 1).is_err());
        let (t, h) = generate_pair(8).unwrap();
        assert!(t.is_quasi_triangular() && (0..8).all(|i| t[(i, i)] < 0.0));
        assert_eq!(h, h.transpose());
    }
}
