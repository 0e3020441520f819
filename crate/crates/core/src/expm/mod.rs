//! Scaling and squaring for `e^A`, `e^B` and `L_exp(A, B, E)` together.

mod constants;
mod squaring;

pub use constants::{derive_ell_theta, derive_table, EllTable, ELL_TABLE};
pub use squaring::{squaring_phase, ReplacementContext, SquaringOutput, TriangularDiag};

use crate::densela::{matmul, LuFactors, Mat, MatmulCounter};
use crate::error::{Error, Result};
use crate::pade::{check_triple, eval_uv, pade_scheme, rational_solve, EvenPowers, SideHint};
use crate::scalar::Scalar;

/// Scaling parameter at and above which the Schur pathway is taken.
pub const SCHUR_THRESHOLD: u32 = 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SchurPolicy {
    /// Schur forms when `s >= 10`.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpmOptions {
    pub schur: SchurPolicy,
    pub side: SideHint,
    /// Recompute diagonal blocks of (quasi-)triangular iterates exactly while squaring.
    pub replacement: bool,
}

impl Default for ExpmOptions {
    fn default() -> Self {
        Self {
            schur: SchurPolicy::Auto,
            side: SideHint::Auto,
            replacement: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpmResult<T> {
    pub x: Mat<T>,
    pub y: Mat<T>,
    pub d: Mat<T>,
    pub m: usize,
    pub s: u32,
    pub used_schur: bool,
    pub matmuls: usize,
    /// Some entry left the double range during squaring.
    pub overflow: bool,
}

/// `(m, s)` for `eta = max(norm_a, norm_b)`: the smallest `m` in {3, 5, 7, 9}
/// with `eta <= ell_m` and `s = 0`, otherwise `m = 13` and the smallest `s`
/// with `2^-s eta <= ell_13`.
pub fn select_params(norm_a: f64, norm_b: f64, table: &EllTable) -> Result<(usize, u32)> {
    if !norm_a.is_finite() || !norm_b.is_finite() {
        return Err(Error::NonFinite);
    }
    let eta = norm_a.max(norm_b);
    for (i, &m) in [3, 5, 7, 9].iter().enumerate() {
        if eta <= table.ell[i] {
            return Ok((m, 0));
        }
    }
    Ok((13, halvings(eta, table.ell[4])))
}

/// Smallest `s` with `2^-s x <= limit`; halving is exact in this range.
fn halvings(mut x: f64, limit: f64) -> u32 {
    let mut s = 0;
    while x > limit {
        x *= 0.5;
        s += 1;
    }
    s
}

/// `m * 2^k`, exact unless the result leaves the normal range.
pub fn scale_pow2<T: Scalar>(m: &Mat<T>, k: i64) -> Mat<T> {
    let mut out = m.clone();
    let mut k = k;
    while k != 0 {
        let step = k.clamp(-1000, 1000);
        let f = crate::scalar::pow2(step as i32);
        for z in out.as_mut_slice() {
            *z = z.mul_real(f);
        }
        k -= step;
    }
    out
}

fn check_finite<T: Scalar>(ms: &[&Mat<T>]) -> Result<()> {
    if ms.iter().all(|m| m.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Lower but not upper triangular.
fn strictly_lower<T: Scalar>(m: &Mat<T>) -> bool {
    !m.is_upper_triangular() && m.transpose().is_upper_triangular()
}

/// `P_r M P_c` with `P` the reversal permutation on the chosen sides.
fn reverse<T: Scalar>(m: &Mat<T>, rows: bool, cols: bool) -> Mat<T> {
    let (r, c) = m.shape();
    Mat::from_fn(r, c, |i, j| m[(if rows { r - 1 - i } else { i }, if cols { c - 1 - j } else { j })])
}

/// Algorithm 4.1: `X ~ e^A`, `Y ~ e^B`, `D ~ L_exp(A, B, E)`.
///
/// A lower triangular `A` or `B` is first reversed into upper triangular form,
/// an exact similarity, so that its diagonal can be recomputed while squaring.
pub fn expm_block_tri<T: Scalar>(a: &Mat<T>, b: &Mat<T>, e: &Mat<T>, opts: &ExpmOptions) -> Result<ExpmResult<T>> {
    check_triple(a, b, e)?;
    check_finite(&[a, b, e])?;
    let (ra, rb) = (strictly_lower(a), strictly_lower(b));
    if ra || rb {
        let a_r = reverse(a, ra, ra);
        let b_r = reverse(b, rb, rb);
        let mut res = expm_upper(&a_r, &b_r, &reverse(e, ra, rb), opts)?;
        res.x = reverse(&res.x, ra, ra);
        res.y = reverse(&res.y, rb, rb);
        res.d = reverse(&res.d, ra, rb);
        return Ok(res);
    }
    expm_upper(a, b, e, opts)
}

fn expm_upper<T: Scalar>(a: &Mat<T>, b: &Mat<T>, e: &Mat<T>, opts: &ExpmOptions) -> Result<ExpmResult<T>> {
    let counter = MatmulCounter::new();
    let (m, s) = select_params(a.norm_inf(), b.norm_inf(), &ELL_TABLE)?;
    let use_schur = match opts.schur {
        SchurPolicy::Auto => s >= SCHUR_THRESHOLD,
        SchurPolicy::Always => true,
        SchurPolicy::Never => false,
    };
    // Blocks already in Schur form keep `Q = I`.
    let schur_of = |m: &Mat<T>| -> Result<Option<crate::densela::SchurForm<T>>> {
        if use_schur && !m.is_quasi_triangular() {
            T::schur(m).map(Some)
        } else {
            Ok(None)
        }
    };
    let (schur_a, schur_b) = (schur_of(a)?, schur_of(b)?);
    let mut e_w = e.clone();
    if let Some(sa) = &schur_a {
        e_w = matmul(&sa.q.adjoint(), &e_w, &counter)?;
    }
    if let Some(sb) = &schur_b {
        e_w = matmul(&e_w, &sb.q, &counter)?;
    }
    let a_w = schur_a.as_ref().map_or_else(|| a.clone(), |f| f.t.clone());
    let b_w = schur_b.as_ref().map_or_else(|| b.clone(), |f| f.t.clone());

    let k = -(s as i64);
    let scheme = pade_scheme(&scale_pow2(&a_w, k), &scale_pow2(&b_w, k), &scale_pow2(&e_w, k), m, &counter)?;
    let (x0, y0, d0) = rational_solve(&scheme, opts.side, &counter)?;

    let ctx = if opts.replacement {
        ReplacementContext {
            a: TriangularDiag::detect(&a_w),
            b: TriangularDiag::detect(&b_w),
        }
    } else {
        ReplacementContext::none()
    };
    let sq = squaring_phase(x0, y0, d0, s, &ctx, &counter)?;
    let (mut x, mut y, mut d) = (sq.x, sq.y, sq.d);

    if let Some(sa) = &schur_a {
        x = matmul(&matmul(&sa.q, &x, &counter)?, &sa.q.adjoint(), &counter)?;
        d = matmul(&sa.q, &d, &counter)?;
    }
    if let Some(sb) = &schur_b {
        y = matmul(&matmul(&sb.q, &y, &counter)?, &sb.q.adjoint(), &counter)?;
        d = matmul(&d, &sb.q.adjoint(), &counter)?;
    }
    Ok(ExpmResult {
        x,
        y,
        d,
        m,
        s,
        used_schur: use_schur,
        matmuls: counter.get(),
        overflow: sq.overflow,
    })
}

/// Plain scaling and squaring for `e^M` with the `theta_m` thresholds, no
/// transformations and no diagonal replacement. Used as the block-embedding
/// baseline. Returns `(e^M, m, s)`.
pub fn expm<T: Scalar>(mat: &Mat<T>) -> Result<(Mat<T>, usize, u32)> {
    crate::densela::ensure_square("expm", mat)?;
    check_finite(&[mat])?;
    let counter = MatmulCounter::new();
    let eta = mat.norm_inf();
    let th = &ELL_TABLE.theta;
    let (m, s) = match [3, 5, 7, 9].iter().enumerate().find(|(i, _)| eta <= th[*i]) {
        Some((_, &m)) => (m, 0),
        None => (13, halvings(eta, th[4])),
    };
    let scaled = scale_pow2(mat, -(s as i64));
    let pw = EvenPowers::new(&scaled, m, &counter)?;
    let uv = eval_uv(&scaled, m, &pw, &counter)?;
    let mut x = LuFactors::new(&(&uv.v - &uv.u))?.solve_left(&(&uv.u + &uv.v))?;
    for _ in 0..s {
        x = matmul(&x, &x, &counter)?;
    }
    Ok((x, m, s))
}

/// `L_exp(A, B, E)` read off the plain exponential of the `(n+d)`-square block matrix.
pub fn block_embed<T: Scalar>(a: &Mat<T>, b: &Mat<T>, e: &Mat<T>) -> Result<ExpmResult<T>> {
    check_triple(a, b, e)?;
    let (n, d) = (a.rows(), b.rows());
    let (f, m, s) = expm(&Mat::block_upper(a, b, e))?;
    let overflow = !f.is_finite();
    Ok(ExpmResult {
        x: f.block(0, 0, n, n),
        y: f.block(n, n, d, d),
        d: f.block(0, n, n, d),
        m,
        s,
        used_schur: false,
        matmuls: 0,
        overflow,
    })
}
