use num_complex::Complex64;

use super::{gemm_sequential as mul, schur_complex, Mat};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, UNIT_ROUNDOFF};

fn check_shapes<T: Scalar>(a: &Mat<T>, b: &Mat<T>, c: &Mat<T>) -> Result<()> {
    super::ensure_square("sylvester", a)?;
    super::ensure_square("sylvester", b)?;
    if c.shape() != (a.rows(), b.rows()) {
        return Err(Error::DimensionMismatch {
            op: "sylvester",
            left: (a.rows(), b.rows()),
            right: c.shape(),
        });
    }
    Ok(())
}

/// Solve `T R + R S = C` for upper triangular `T` and `S`.
///
/// `scale` is the magnitude `||A|| + ||B||` of the original operands; a
/// diagonal sum `t_ii + s_jj` below `10 u scale` is rejected.
pub fn sylvester_triangular<T: Scalar>(t: &Mat<T>, s: &Mat<T>, c: &Mat<T>, scale: f64) -> Result<Mat<T>> {
    check_shapes(t, s, c)?;
    let (n, d) = c.shape();
    let tol = 10.0 * UNIT_ROUNDOFF * scale;
    let mut sep = f64::INFINITY;
    for i in 0..n {
        for j in 0..d {
            sep = sep.min((t[(i, i)] + s[(j, j)]).modulus());
        }
    }
    if n > 0 && d > 0 && (sep < tol || sep == 0.0) {
        return Err(Error::IllSeparated {
            separation: sep,
            tolerance: tol,
        });
    }
    let mut r = c.clone();
    for j in 0..d {
        // rhs_j = c_j - sum_{k<j} s_kj r_k
        for k in 0..j {
            let skj = s[(k, j)];
            if skj == T::zero() {
                continue;
            }
            for i in 0..n {
                let rik = r[(i, k)];
                r[(i, j)] -= rik * skj;
            }
        }
        let sjj = s[(j, j)];
        let col = r.col_mut(j);
        for i in (0..n).rev() {
            col[i] /= t[(i, i)] + sjj;
            let x = col[i];
            if x != T::zero() {
                for (ci, &tik) in col[..i].iter_mut().zip(&t.col(i)[..i]) {
                    *ci -= tik * x;
                }
            }
        }
    }
    Ok(r)
}

/// Bartels–Stewart solution of `A R + R B = C` in complex arithmetic.
pub fn sylvester_solve(a: &Mat<Complex64>, b: &Mat<Complex64>, c: &Mat<Complex64>) -> Result<Mat<Complex64>> {
    check_shapes(a, b, c)?;
    let scale = a.norm_fro() + b.norm_fro();
    let sa = schur_complex(a)?;
    let sb = schur_complex(b)?;
    let f = mul(&mul(&sa.q.adjoint(), c), &sb.q);
    let y = sylvester_triangular(&sa.t, &sb.t, &f, scale)?;
    let r = mul(&mul(&sa.q, &y), &sb.q.adjoint());
    debug_check_residual(a, b, c, &r, scale);
    Ok(r)
}

/// Real wrapper around [`sylvester_solve`]; the solution of a real equation is real.
pub fn sylvester_solve_real(a: &Mat<f64>, b: &Mat<f64>, c: &Mat<f64>) -> Result<Mat<f64>> {
    Ok(sylvester_solve(&a.to_complex(), &b.to_complex(), &c.to_complex())?.real_part())
}

/// Relative residual `||A R + R B - C|| / ((||A|| + ||B||) ||R||)` in the Frobenius norm.
pub fn sylvester_residual<T: Scalar>(a: &Mat<T>, b: &Mat<T>, c: &Mat<T>, r: &Mat<T>) -> f64 {
    let res = &(&mul(a, r) + &mul(r, b)) - c;
    let denom = (a.norm_fro() + b.norm_fro()) * r.norm_fro();
    if denom == 0.0 {
        res.norm_fro()
    } else {
        res.norm_fro() / denom
    }
}

#[cfg(debug_assertions)]
fn debug_check_residual<T: Scalar>(a: &Mat<T>, b: &Mat<T>, c: &Mat<T>, r: &Mat<T>, _scale: f64) {
    if !r.is_finite() {
        return;
    }
    let bound = 50.0 * (a.rows() + b.rows()) as f64 * UNIT_ROUNDOFF;
    let rel = sylvester_residual(a, b, c, r);
    debug_assert!(rel <= bound, "Sylvester residual {rel:e} exceeds {bound:e}");
}

#[cfg(not(debug_assertions))]
fn debug_check_residual<T: Scalar>(_: &Mat<T>, _: &Mat<T>, _: &Mat<T>, _: &Mat<T>, _: f64) {}
