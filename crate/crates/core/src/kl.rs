//! Kenney–Laub Schur–Fréchet method, recursive form.
//!
//! `L_exp(A, B, E) = (e^A R + R e^B) / 2` with `R = tau(L) E`,
//! `L(R) = (A R - R B) / 2` and `tau(z) = tanh(z)/z`. `tau` is replaced by its
//! `[8/8]` Padé approximant in product form, so `R` comes out of eight
//! Sylvester solves. Larger arguments are scaled by `2^-s` and the result is
//! carried back up one level at a time with independently computed exponentials.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::batch::join;
use crate::densela::{gemm_parallel, schur_complex, sylvester_solve, sylvester_triangular, Mat};
use crate::error::{Error, Result};
use crate::expm::{expm_block_tri, ExpmOptions, ExpmResult};
use crate::oracle::big::{abs, big, to_f64, zero};
use crate::oracle::series::{tau_imag, tau_pade44};
use crate::oracle::{digits_to_bits, poly_roots, BigFloat};

type C = Complex64;

/// Zeros `alpha_j` and poles `beta_j` of `r_8(z) = prod (1 - z/alpha_j) / (1 - z/beta_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauPade {
    pub alpha: [C; 8],
    pub beta: [C; 8],
}

impl TauPade {
    /// `r_8(z)` from the product form.
    pub fn eval(&self, z: C) -> C {
        self.alpha.iter().zip(&self.beta).fold(C::new(1.0, 0.0), |acc, (a, b)| {
            acc * (C::new(1.0, 0.0) - z / a) / (C::new(1.0, 0.0) - z / b)
        })
    }
}

const TAU_BITS: usize = 256;

/// `z`-roots `+-sqrt(w_j)` of a polynomial in `w = z^2`.
fn z_roots(w_poly: &[BigFloat]) -> Result<[C; 8]> {
    let w = poly_roots(w_poly, TAU_BITS)?;
    if w.len() != 4 {
        return Err(Error::RootFinding { degree: w_poly.len() - 1 });
    }
    let mut out = [C::new(0.0, 0.0); 8];
    for (k, wk) in w.iter().enumerate() {
        let r = wk.sqrt();
        let (re, im) = r.to_f64_pair();
        out[2 * k] = C::new(re, im);
        out[2 * k + 1] = C::new(-re, -im);
    }
    Ok(out)
}

fn compute_tau_pade() -> Result<TauPade> {
    let (p, q) = tau_pade44(TAU_BITS);
    Ok(TauPade {
        alpha: z_roots(&p)?,
        beta: z_roots(&q)?,
    })
}

/// The `[8/8]` Padé factors of `tau`, computed once in 256-bit arithmetic.
pub fn tau_pade8() -> Result<&'static TauPade> {
    static CELL: OnceLock<Result<TauPade>> = OnceLock::new();
    match CELL.get_or_init(compute_tau_pade) {
        Ok(t) => Ok(t),
        Err(e) => Err(e.clone()),
    }
}

/// `|tau(iy) - r_8(iy)|` evaluated at `digits` decimal digits, with `r_8`
/// taken from the exact Padé coefficients rather than the rounded roots.
pub fn tau_pade_gap(y: f64, digits: usize) -> f64 {
    let bits = digits_to_bits(digits).max(TAU_BITS);
    let (p, q) = tau_pade44(bits);
    let yb = big(y, bits);
    let w = -(&yb * &yb);
    let horner = |c: &[BigFloat]| c.iter().rev().fold(zero(bits), |acc, ck| acc * &w + ck);
    let r8 = horner(&p) / horner(&q);
    to_f64(&abs(&(tau_imag(&yb, bits) - r8)))
}

/// Per-level exponential diagnostics: `(level, m, s)` for `e^(A/2^level)` and `e^(B/2^level)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlLevel {
    pub level: u32,
    pub a: (usize, u32),
    pub b: (usize, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct KlResult<T> {
    pub d: Mat<T>,
    /// Scaling of the `tau` argument: smallest `s` with `2^-s max(||A||_F, ||B||_F) <= 1/4`.
    pub s: u32,
    pub levels: Vec<KlLevel>,
    /// Largest imaginary part discarded when the inputs were real.
    pub imag_dropped: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KlOptions {
    /// Reduce `A` and `B` to complex Schur form first.
    pub schur: bool,
}

impl Default for KlOptions {
    fn default() -> Self {
        Self { schur: true }
    }
}

fn shifted(m: &Mat<C>, sign: f64, root: C) -> Mat<C> {
    // I + sign * M / root
    let inv = C::new(sign, 0.0) / root;
    let mut out = m.map(|z| z * inv);
    out.add_diag(C::new(1.0, 0.0));
    out
}

/// `(I + A/alpha) R + R (I - B/alpha)`.
fn apply_factor(a: &Mat<C>, b: &Mat<C>, r: &Mat<C>, root: C) -> Mat<C> {
    let inv = C::new(1.0, 0.0) / root;
    let lr = &gemm_parallel(a, r) - &gemm_parallel(r, b);
    &r.scale(2.0) + &lr.map(|z| z * inv)
}

fn cascade(a: &Mat<C>, b: &Mat<C>, e: &Mat<C>, tp: &TauPade, triangular: bool) -> Result<Mat<C>> {
    let scale = a.norm_fro() + b.norm_fro() + 2.0;
    let mut r = e.clone();
    for (alpha, beta) in tp.alpha.iter().zip(&tp.beta) {
        let rhs = apply_factor(a, b, &r, *alpha);
        let (lhs_a, lhs_b) = (shifted(a, 1.0, *beta), shifted(b, -1.0, *beta));
        r = if triangular {
            sylvester_triangular(&lhs_a, &lhs_b, &rhs, scale)?
        } else {
            sylvester_solve(&lhs_a, &lhs_b, &rhs)?
        };
    }
    Ok(r)
}

/// `R_8 = r_8(L) E` for already scaled `A`, `B` (max Frobenius norm at most 1/4).
pub fn sylvester_cascade(a: &Mat<C>, b: &Mat<C>, e: &Mat<C>, tp: &TauPade) -> Result<Mat<C>> {
    crate::pade::check_triple(a, b, e)?;
    let triangular = a.is_upper_triangular() && b.is_upper_triangular();
    cascade(a, b, e, tp, triangular)
}

/// `(e^(A/2^level), e^(B/2^level))`, computed concurrently.
pub fn level_exponentials(a: &Mat<C>, b: &Mat<C>, level: u32) -> Result<(Mat<C>, Mat<C>, KlLevel)> {
    let opts = ExpmOptions::default();
    let k = -(level as i64);
    let one_sided = |m: &Mat<C>| -> Result<ExpmResult<C>> {
        let scaled = crate::expm::scale_pow2(m, k);
        expm_block_tri(&scaled, &Mat::zeros(0, 0), &Mat::zeros(m.rows(), 0), &opts)
    };
    let (ra, rb) = join(|| one_sided(a), || one_sided(b));
    let (ra, rb) = (ra?, rb?);
    let info = KlLevel {
        level,
        a: (ra.m, ra.s),
        b: (rb.m, rb.s),
    };
    Ok((ra.x, rb.x, info))
}

fn update(x: &Mat<C>, y: &Mat<C>, d: &Mat<C>) -> Mat<C> {
    &gemm_parallel(x, d) + &gemm_parallel(d, y)
}

/// Kenney–Laub approximation of `L_exp(A, B, E)` for complex data.
pub fn kl_frechet_complex(a: &Mat<C>, b: &Mat<C>, e: &Mat<C>, opts: &KlOptions) -> Result<KlResult<C>> {
    crate::pade::check_triple(a, b, e)?;
    if !(a.is_finite() && b.is_finite() && e.is_finite()) {
        return Err(Error::NonFinite);
    }
    let tp = tau_pade8()?;
    let eta = a.norm_fro().max(b.norm_fro());
    let mut s = 0u32;
    let mut t = eta;
    while t > 0.25 {
        t *= 0.5;
        s += 1;
    }

    let (ta, tb, e_w, qs) = if opts.schur {
        let (sa, sb) = join(|| schur_complex(a), || schur_complex(b));
        let (sa, sb) = (sa?, sb?);
        let e_w = gemm_parallel(&gemm_parallel(&sa.q.adjoint(), e), &sb.q);
        (sa.t, sb.t, e_w, Some((sa.q, sb.q)))
    } else {
        (a.clone(), b.clone(), e.clone(), None)
    };

    let k = -(s as i64);
    let r = cascade(
        &crate::expm::scale_pow2(&ta, k),
        &crate::expm::scale_pow2(&tb, k),
        &e_w,
        tp,
        opts.schur,
    )?;

    let mut levels = Vec::new();
    let mut d = r;
    if s == 0 {
        let (x, y, info) = level_exponentials(&ta, &tb, 0)?;
        levels.push(info);
        d = update(&x, &y, &d).scale(0.5);
    } else {
        let (mut x, mut y, info) = level_exponentials(&ta, &tb, 1)?;
        levels.push(info);
        for j in 1..=s {
            d = update(&x, &y, &d);
            if j < s {
                let (xn, yn, info) = level_exponentials(&ta, &tb, j + 1)?;
                levels.push(info);
                x = xn;
                y = yn;
            }
        }
        d = update(&x, &y, &d);
        d = crate::expm::scale_pow2(&d, -(s as i64) - 1);
    }

    if let Some((qa, qb)) = qs {
        d = gemm_parallel(&gemm_parallel(&qa, &d), &qb.adjoint());
    }
    Ok(KlResult {
        d,
        s,
        levels,
        imag_dropped: 0.0,
    })
}

/// Kenney–Laub approximation for real data. The computation is complex
/// throughout; the imaginary part of the result is dropped and its size recorded.
pub fn kl_frechet(a: &Mat<f64>, b: &Mat<f64>, e: &Mat<f64>, opts: &KlOptions) -> Result<KlResult<f64>> {
    let r = kl_frechet_complex(&a.to_complex(), &b.to_complex(), &e.to_complex(), opts)?;
    Ok(KlResult {
        imag_dropped: r.d.max_imag(),
        d: r.d.real_part(),
        s: r.s,
        levels: r.levels,
    })
}
