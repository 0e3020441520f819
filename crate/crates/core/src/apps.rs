//! Kernels that reduce to one or more block triangular exponentials.

use crate::densela::{gemm_sequential, Mat};
use crate::error::{Error, Result};
use crate::expm::{expm_block_tri, ExpmOptions};
use crate::scalar::{Scalar, UNIT_ROUNDOFF};

fn mat_vec<T: Scalar>(m: &Mat<T>, v: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); m.rows()];
    for (j, &vj) in v.iter().enumerate() {
        for (o, &mij) in out.iter_mut().zip(m.col(j)) {
            *o += mij * vj;
        }
    }
    out
}

/// `J_p(0)`: ones on the superdiagonal.
pub fn jordan_zero<T: Scalar>(p: usize) -> Mat<T> {
    Mat::from_fn(p, p, |i, j| if j == i + 1 { T::one() } else { T::zero() })
}

/// `phi_0(A) w_0 + phi_1(A) w_1 + ... + phi_p(A) w_p` as
/// `e^A w_0 + L_exp(A, J_p(0), W) e_p` with `W = [w_p, w_{p-1}, ..., w_1]`.
pub fn phi_combination<T: Scalar>(a: &Mat<T>, w: &[Vec<T>]) -> Result<Vec<T>> {
    crate::densela::ensure_square("phi_combination", a)?;
    let n = a.rows();
    if w.is_empty() {
        return Err(Error::InvalidInput("phi_combination needs at least w_0".into()));
    }
    if let Some(bad) = w.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            op: "phi_combination",
            left: (n, n),
            right: (bad.len(), 1),
        });
    }
    let p = w.len() - 1;
    let wm = Mat::from_fn(n, p, |i, k| w[p - k][i]);
    let res = expm_block_tri(a, &jordan_zero(p), &wm, &ExpmOptions::default())?;
    let mut out = mat_vec(&res.x, &w[0]);
    if p > 0 {
        for (o, &dk) in out.iter_mut().zip(res.d.col(p - 1)) {
            *o += dk;
        }
    }
    Ok(out)
}

/// Blocks of `exp([[T, H], [0, -T^T]])`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianExp {
    /// `e^T`.
    pub f: Mat<f64>,
    /// `L_exp(T, -T^T, H)`.
    pub dh: Mat<f64>,
    /// `e^(-T^T)`, which equals `F^-T`.
    pub y: Mat<f64>,
}

impl HamiltonianExp {
    /// The full `2n x 2n` exponential.
    pub fn assemble(&self) -> Mat<f64> {
        Mat::block_upper(&self.f, &self.y, &self.dh)
    }
}

pub fn hamiltonian_exp(t: &Mat<f64>, h: &Mat<f64>) -> Result<HamiltonianExp> {
    crate::densela::ensure_square("hamiltonian_exp", t)?;
    crate::densela::ensure_square("hamiltonian_exp", h)?;
    if h.rows() != t.rows() {
        return Err(Error::DimensionMismatch {
            op: "hamiltonian_exp",
            left: t.shape(),
            right: h.shape(),
        });
    }
    let asym = (h - &h.transpose()).max_abs();
    if asym > 10.0 * UNIT_ROUNDOFF * h.max_abs() {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let res = expm_block_tri(t, &t.transpose().scale(-1.0), h, &ExpmOptions::default())?;
    Ok(HamiltonianExp {
        f: res.x,
        dh: res.d,
        y: res.y,
    })
}

/// One step of a nested block upper triangular recursion.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedLevel<T> {
    /// Coupling to everything accumulated so far.
    pub e: Mat<T>,
    /// New diagonal block.
    pub g: Mat<T>,
}

/// `F_0 = e^(G_00)` and `F_n = [[F_(n-1), L_exp(G_(n-1), G_nn, E_n)], [0, e^(G_nn)]]`
/// where `G_(n-1)` is the accumulated generator.
pub fn nested_sequence<T: Scalar>(g00: &Mat<T>, levels: &[NestedLevel<T>]) -> Result<Vec<Mat<T>>> {
    crate::densela::ensure_square("nested_sequence", g00)?;
    let opts = ExpmOptions::default();
    let first = expm_block_tri(g00, &Mat::zeros(0, 0), &Mat::zeros(g00.rows(), 0), &opts)?;
    let mut out = vec![first.x];
    let mut acc = g00.clone();
    for lvl in levels {
        let res = expm_block_tri(&acc, &lvl.g, &lvl.e, &opts)?;
        let prev = out.last().expect("at least F_0");
        out.push(Mat::block_upper(prev, &res.y, &res.d));
        acc = Mat::block_upper(&acc, &lvl.g, &lvl.e);
    }
    Ok(out)
}

/// Exponential of an upper triangular matrix split at `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionedExp<T> {
    pub f: Mat<T>,
    pub k: usize,
}

/// Split `T = [[A_k, E_k], [0, B_k]]` at the `k` minimizing
/// `max(||A_k||_inf, ||B_k||_inf)` (smallest such `k`) and exponentiate with
/// one block triangular call.
pub fn triangular_expm_partitioned<T: Scalar>(t: &Mat<T>) -> Result<PartitionedExp<T>> {
    crate::densela::ensure_square("triangular_expm_partitioned", t)?;
    let n = t.rows();
    if n < 2 || !t.is_upper_triangular() {
        return Err(Error::InvalidInput(
            "an upper triangular matrix of order at least 2 is required".into(),
        ));
    }
    let cost = |k: usize| t.block(0, 0, k, k).norm_inf().max(t.block(k, k, n - k, n - k).norm_inf());
    let mut k = 1;
    let mut best = cost(1);
    for cand in 2..n {
        let c = cost(cand);
        if c < best {
            best = c;
            k = cand;
        }
    }
    let (a, b, e) = (t.block(0, 0, k, k), t.block(k, k, n - k, n - k), t.block(0, k, k, n - k));
    let res = expm_block_tri(&a, &b, &e, &ExpmOptions::default())?;
    Ok(PartitionedExp {
        f: Mat::block_upper(&res.x, &res.y, &res.d),
        k,
    })
}

/// `M^T J M` with `J = [[0, I], [-I, 0]]`, for checking symplecticity.
pub fn symplectic_form(m: &Mat<f64>) -> Mat<f64> {
    let n = m.rows() / 2;
    let mut j = Mat::zeros(2 * n, 2 * n);
    j.set_block(0, n, &Mat::identity(n));
    j.set_block(n, 0, &Mat::identity(n).scale(-1.0));
    gemm_sequential(&gemm_sequential(&m.transpose(), &j), m)
}
