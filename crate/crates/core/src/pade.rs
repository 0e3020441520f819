//! Diagonal Padé approximants to `e^z` and their block operator counterparts.
//!
//! `p_m(z) = u_m(z) + v_m(z)` is split into odd and even parts so that the
//! denominator `q_m(z) = p_m(-z) = -u_m(z) + v_m(z)` comes for free.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::densela::{matmul, LuFactors, Mat, MatmulCounter};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Padé degrees supported by the algorithms.
pub const DEGREES: [usize; 5] = [3, 5, 7, 9, 13];

/// Numerator coefficients `c_0..c_m` of the `[m/m]` Padé approximant to `e^z`.
#[derive(Clone, Debug)]
pub struct PadeCoeffs {
    pub m: usize,
    pub exact: Vec<BigRational>,
    pub c: Vec<f64>,
}

fn generate(m: usize) -> PadeCoeffs {
    let mut exact = vec![BigRational::one()];
    for k in 1..=m {
        let num = BigInt::from(m - k + 1);
        let den = BigInt::from((2 * m - k + 1) * k);
        let next = &exact[k - 1] * BigRational::new(num, den);
        exact.push(next);
    }
    let c = exact.iter().map(|r| r.to_f64().expect("finite coefficient")).collect();
    PadeCoeffs { m, exact, c }
}

/// Coefficients for `m` in {3, 5, 7, 9, 13}, generated once in exact rationals.
pub fn pade_coeffs(m: usize) -> Result<&'static PadeCoeffs> {
    static TABLE: OnceLock<Vec<PadeCoeffs>> = OnceLock::new();
    let idx = DEGREES.iter().position(|&d| d == m).ok_or(Error::UnsupportedDegree(m))?;
    Ok(&TABLE.get_or_init(|| DEGREES.iter().map(|&d| generate(d)).collect())[idx])
}

/// Even powers `M^2, M^4, ...` needed by degree `m`.
#[derive(Clone, Debug)]
pub struct EvenPowers<T> {
    /// `pw[k]` holds `M^(2k+2)`.
    pw: Vec<Mat<T>>,
}

impl<T: Scalar> EvenPowers<T> {
    /// `M^2`, `M^4` and, as needed, `M^6` and `M^8` (`M^8 = M^4 M^4`).
    pub fn new(m_mat: &Mat<T>, m: usize, counter: &MatmulCounter) -> Result<Self> {
        let count = match m {
            3 => 1,
            5 => 2,
            7 | 13 => 3,
            9 => 4,
            _ => return Err(Error::UnsupportedDegree(m)),
        };
        let mut pw = vec![matmul(m_mat, m_mat, counter)?];
        if count >= 2 {
            pw.push(matmul(&pw[0], &pw[0], counter)?);
        }
        if count >= 3 {
            pw.push(matmul(&pw[0], &pw[1], counter)?);
        }
        if count >= 4 {
            pw.push(matmul(&pw[1], &pw[1], counter)?);
        }
        Ok(Self { pw })
    }

    /// `M^k` for even `k >= 2`.
    pub fn get(&self, k: usize) -> &Mat<T> {
        assert!(k >= 2 && k.is_multiple_of(2), "even power expected");
        &self.pw[k / 2 - 1]
    }

    pub fn highest(&self) -> usize {
        2 * self.pw.len()
    }
}

/// `u_m(M)`, `v_m(M)` with the intermediate odd polynomial kept for the operator scheme.
#[derive(Clone, Debug)]
pub struct UvParts<T> {
    pub u: Mat<T>,
    pub v: Mat<T>,
    /// `w(M)` with `u = M w(M)`.
    pub w: Mat<T>,
    /// `w_1(M)` and `y_1(M)` of the degree-13 factorization.
    pub w1: Option<Mat<T>>,
    pub y1: Option<Mat<T>>,
}

fn poly_even<T: Scalar>(c: &[f64], powers: &EvenPowers<T>, idx: impl Iterator<Item = (usize, usize)>, n: usize, c0: Option<f64>) -> Mat<T> {
    // sum of c[ci] * M^(pk) over the index pairs, plus c0 * I.
    let mut out = Mat::zeros(n, n);
    for (ci, pk) in idx {
        out.axpy(c[ci], powers.get(pk));
    }
    if let Some(c0) = c0 {
        out.add_diag(T::from_real(c0));
    }
    out
}

/// Evaluate `u_m(M)` and `v_m(M)` from the precomputed even powers.
pub fn eval_uv<T: Scalar>(m_mat: &Mat<T>, m: usize, powers: &EvenPowers<T>, counter: &MatmulCounter) -> Result<UvParts<T>> {
    let c = &pade_coeffs(m)?.c;
    let n = m_mat.rows();
    if m == 13 {
        if powers.highest() < 6 {
            return Err(Error::InvalidInput("degree 13 needs M^2, M^4, M^6".into()));
        }
        let w1 = poly_even(c, powers, [(13, 6), (11, 4), (9, 2)].into_iter(), n, None);
        let w2 = poly_even(c, powers, [(7, 6), (5, 4), (3, 2)].into_iter(), n, Some(c[1]));
        let y1 = poly_even(c, powers, [(12, 6), (10, 4), (8, 2)].into_iter(), n, None);
        let y2 = poly_even(c, powers, [(6, 6), (4, 4), (2, 2)].into_iter(), n, Some(c[0]));
        let w = &matmul(powers.get(6), &w1, counter)? + &w2;
        let u = matmul(m_mat, &w, counter)?;
        let v = &matmul(powers.get(6), &y1, counter)? + &y2;
        return Ok(UvParts {
            u,
            v,
            w,
            w1: Some(w1),
            y1: Some(y1),
        });
    }
    let half = (m - 1) / 2;
    if powers.highest() < 2 * half {
        return Err(Error::InvalidInput(format!("degree {m} needs even powers up to M^{}", 2 * half)));
    }
    let w = poly_even(c, powers, (1..=half).rev().map(|k| (2 * k + 1, 2 * k)), n, Some(c[1]));
    let v = poly_even(c, powers, (1..=half).rev().map(|k| (2 * k, 2 * k)), n, Some(c[0]));
    let u = matmul(m_mat, &w, counter)?;
    Ok(UvParts {
        u,
        v,
        w,
        w1: None,
        y1: None,
    })
}

/// `M_l = L_{z^l}(A, B, E)` for the even indices a degree needs.
#[derive(Clone, Debug)]
pub struct MSequence<T> {
    /// `ms[k]` holds `M_(2k+2)`.
    ms: Vec<Mat<T>>,
}

impl<T: Scalar> MSequence<T> {
    pub fn get(&self, l: usize) -> &Mat<T> {
        assert!(l >= 2 && l.is_multiple_of(2), "even index expected");
        &self.ms[l / 2 - 1]
    }

    pub fn highest(&self) -> usize {
        2 * self.ms.len()
    }
}

/// `M_2 = A E + E B`, `M_4 = A^2 M_2 + M_2 B^2`, `M_6 = A^4 M_2 + M_4 B^2`,
/// `M_8 = A^4 M_4 + M_4 B^4`, up to `M_upto`.
pub fn m_sequence<T: Scalar>(
    a: &Mat<T>,
    b: &Mat<T>,
    e: &Mat<T>,
    pa: &EvenPowers<T>,
    pb: &EvenPowers<T>,
    upto: usize,
    counter: &MatmulCounter,
) -> Result<MSequence<T>> {
    check_triple(a, b, e)?;
    let need = match upto {
        2 => 0,
        4 => 2,
        6 | 8 => 4,
        _ => usize::MAX,
    };
    if need == usize::MAX || pa.highest() < need || pb.highest() < need {
        return Err(Error::InvalidInput(format!("M_{upto} is not available from the supplied powers")));
    }
    let mut ms = vec![&matmul(a, e, counter)? + &matmul(e, b, counter)?];
    if upto >= 4 {
        ms.push(&matmul(pa.get(2), &ms[0], counter)? + &matmul(&ms[0], pb.get(2), counter)?);
    }
    if upto >= 6 {
        ms.push(&matmul(pa.get(4), &ms[0], counter)? + &matmul(&ms[1], pb.get(2), counter)?);
    }
    if upto >= 8 {
        ms.push(&matmul(pa.get(4), &ms[1], counter)? + &matmul(&ms[1], pb.get(4), counter)?);
    }
    Ok(MSequence { ms })
}

/// `(D_u, D_v) = (L_{u_m}(A,B,E), L_{v_m}(A,B,E))`.
#[allow(clippy::too_many_arguments)]
pub fn eval_l_uv<T: Scalar>(
    a: &Mat<T>,
    e: &Mat<T>,
    m: usize,
    pa: &EvenPowers<T>,
    uv_b: &UvParts<T>,
    ms: &MSequence<T>,
    counter: &MatmulCounter,
) -> Result<(Mat<T>, Mat<T>)> {
    let c = &pade_coeffs(m)?.c;
    let comb = |terms: &[(usize, usize)]| -> Mat<T> {
        let mut out = Mat::zeros(e.rows(), e.cols());
        for &(ci, l) in terms {
            out.axpy(c[ci], ms.get(l));
        }
        out
    };
    if m == 13 {
        let (w1b, y1b) = match (&uv_b.w1, &uv_b.y1) {
            (Some(w1), Some(y1)) => (w1, y1),
            _ => return Err(Error::InvalidInput("degree 13 needs w_1(B), y_1(B)".into())),
        };
        let dw1 = comb(&[(13, 6), (11, 4), (9, 2)]);
        let dw2 = comb(&[(7, 6), (5, 4), (3, 2)]);
        let dy1 = comb(&[(12, 6), (10, 4), (8, 2)]);
        let dy2 = comb(&[(6, 6), (4, 4), (2, 2)]);
        let dw = &(&matmul(pa.get(6), &dw1, counter)? + &matmul(ms.get(6), w1b, counter)?) + &dw2;
        let du = &matmul(a, &dw, counter)? + &matmul(e, &uv_b.w, counter)?;
        let dv = &(&matmul(pa.get(6), &dy1, counter)? + &matmul(ms.get(6), y1b, counter)?) + &dy2;
        return Ok((du, dv));
    }
    let half = (m - 1) / 2;
    let odd: Vec<_> = (1..=half).rev().map(|k| (2 * k + 1, 2 * k)).collect();
    let even: Vec<_> = (1..=half).rev().map(|k| (2 * k, 2 * k)).collect();
    let du = &matmul(a, &comb(&odd), counter)? + &matmul(e, &uv_b.w, counter)?;
    let dv = comb(&even);
    Ok((du, dv))
}

/// Everything the rational solves need.
#[derive(Clone, Debug)]
pub struct SchemeOutput<T> {
    pub ua: Mat<T>,
    pub va: Mat<T>,
    pub ub: Mat<T>,
    pub vb: Mat<T>,
    pub du: Mat<T>,
    pub dv: Mat<T>,
}

/// Which factorization the `D` solve reuses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SideHint {
    /// Left when `n <= d`, otherwise right.
    #[default]
    Auto,
    /// `(V_a - U_a) D = (D_u + D_v) + (D_u - D_v) Y`.
    Left,
    /// `D (V_b - U_b) = (D_u + D_v) + X (D_u - D_v)`.
    Right,
}

/// Run the full degree-`m` scheme on already scaled `(A, B, E)`.
pub fn pade_scheme<T: Scalar>(a: &Mat<T>, b: &Mat<T>, e: &Mat<T>, m: usize, counter: &MatmulCounter) -> Result<SchemeOutput<T>> {
    check_triple(a, b, e)?;
    let pa = EvenPowers::new(a, m, counter)?;
    let pb = EvenPowers::new(b, m, counter)?;
    let upto = match m {
        3 => 2,
        5 => 4,
        7 | 13 => 6,
        _ => 8,
    };
    let ms = m_sequence(a, b, e, &pa, &pb, upto, counter)?;
    let uva = eval_uv(a, m, &pa, counter)?;
    let uvb = eval_uv(b, m, &pb, counter)?;
    let (du, dv) = eval_l_uv(a, e, m, &pa, &uvb, &ms, counter)?;
    Ok(SchemeOutput {
        ua: uva.u,
        va: uva.v,
        ub: uvb.u,
        vb: uvb.v,
        du,
        dv,
    })
}

/// `X = r_m(A)`, `Y = r_m(B)` and `D = L_{r_m}(A, B, E)` from the scheme output.
pub fn rational_solve<T: Scalar>(scheme: &SchemeOutput<T>, side: SideHint, counter: &MatmulCounter) -> Result<(Mat<T>, Mat<T>, Mat<T>)> {
    let SchemeOutput { ua, va, ub, vb, du, dv } = scheme;
    let qa = LuFactors::new(&(va - ua))?;
    let qb = LuFactors::new(&(vb - ub))?;
    let x = qa.solve_left(&(ua + va))?;
    let y = qb.solve_left(&(ub + vb))?;
    let (n, d) = du.shape();
    let left = match side {
        SideHint::Auto => n <= d,
        SideHint::Left => true,
        SideHint::Right => false,
    };
    let lp = du + dv;
    let diff = du - dv;
    let dmat = if left {
        qa.solve_left(&(&lp + &matmul(&diff, &y, counter)?))?
    } else {
        qb.solve_right(&(&lp + &matmul(&x, &diff, counter)?))?
    };
    Ok((x, y, dmat))
}

pub(crate) fn check_triple<T: Scalar>(a: &Mat<T>, b: &Mat<T>, e: &Mat<T>) -> Result<()> {
    crate::densela::ensure_square("block triple (A)", a)?;
    crate::densela::ensure_square("block triple (B)", b)?;
    if e.shape() != (a.rows(), b.rows()) {
        return Err(Error::DimensionMismatch {
            op: "block triple (E)",
            left: (a.rows(), b.rows()),
            right: e.shape(),
        });
    }
    Ok(())
}
