//! Backward-error thresholds `theta_m` and `ell_m`.
//!
//! With `g_{2m+1}(z) = log(e^{-z} r_m(z)) = sum b_k z^{2(m+k)+1}` and
//! `H(z) = sum |b_k| z^{2(m+k)+1}`:
//! `theta_m = max{z : H(z)/z <= u}` bounds the backward error in `e^A`, `e^B`,
//! and `ell_m = max{z : H'(z) <= u}` bounds the backward error in the
//! off-diagonal block.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::oracle::big::{big, to_f64, BigFloat};
use crate::oracle::digits_to_bits;
use crate::oracle::series::{abs_series_eval, pade_log_series};
use crate::pade::DEGREES;
use crate::scalar::UNIT_ROUNDOFF;

/// `ell_m` and `theta_m` for `m` in {3, 5, 7, 9, 13}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllTable {
    pub ell: [f64; 5],
    pub theta: [f64; 5],
}

/// Values produced by [`derive_ell_theta`] at 120 digits, rounded to 16 significant digits.
pub const ELL_TABLE: EllTable = EllTable {
    ell: [ELL_3, ELL_5, ELL_7, ELL_9, ELL_13],
    theta: [THETA_3, THETA_5, THETA_7, THETA_9, THETA_13],
};

const ELL_3: f64 = 1.0813385777848366e-2;
const ELL_5: f64 = 1.9980632069789489e-1;
const ELL_7: f64 = 7.8346084729620435e-1;
const ELL_9: f64 = 1.7824486239692787;
const ELL_13: f64 = 4.7403075437668063;
const THETA_3: f64 = 1.4955852179582915e-2;
const THETA_5: f64 = 2.5393983300632317e-1;
const THETA_7: f64 = 9.5041789961629308e-1;
const THETA_9: f64 = 2.0978479612570671;
const THETA_13: f64 = 5.3719203511481517;

impl EllTable {
    fn index(m: usize) -> Result<usize> {
        DEGREES.iter().position(|&d| d == m).ok_or(Error::UnsupportedDegree(m))
    }

    pub fn ell(&self, m: usize) -> Result<f64> {
        Ok(self.ell[Self::index(m)?])
    }

    pub fn theta(&self, m: usize) -> Result<f64> {
        Ok(self.theta[Self::index(m)?])
    }
}

/// Largest `z` in `(0, inf)` with `f(z) <= u`, for `f` increasing.
fn bisect(f: impl Fn(f64) -> BigFloat, u: &BigFloat) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) <= *u {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= *u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Tail estimate of `sum_j j^p |g_j| z^j` beyond the last stored coefficient,
/// from the ratio of the last two nonzero terms.
fn tail_estimate(g: &[BigFloat], z: f64, derivative: bool) -> f64 {
    let terms: Vec<(usize, f64)> = g
        .iter()
        .enumerate()
        .filter(|(_, c)| !crate::oracle::big::is_zero(c))
        .map(|(j, c)| {
            let w = if derivative { j as f64 } else { 1.0 };
            (j, to_f64(&crate::oracle::big::abs(c)) * w)
        })
        .collect();
    let n = terms.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let (j1, c1) = terms[n - 2];
    let (j2, c2) = terms[n - 1];
    let log_t1 = c1.ln() + j1 as f64 * z.ln();
    let log_t2 = c2.ln() + j2 as f64 * z.ln();
    let rho = (log_t2 - log_t1).exp();
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let last = if derivative { (log_t2 - z.ln()).exp() } else { log_t2.exp() };
    last * rho / (1.0 - rho)
}

/// Compute `(ell_m, theta_m)` with the series evaluated at `digits` decimal digits.
pub fn derive_ell_theta(m: usize, digits: usize) -> Result<(f64, f64)> {
    if !DEGREES.contains(&m) {
        return Err(Error::UnsupportedDegree(m));
    }
    if digits < 100 {
        return Err(Error::InvalidInput(format!("at least 100 digits required, got {digits}")));
    }
    let bits = digits_to_bits(digits);
    let u = big(UNIT_ROUNDOFF, bits);
    let mut order = 2 * (m + 60) + 1;
    loop {
        let g = pade_log_series(m, order, bits);
        let ell = bisect(|z| abs_series_eval(&g, &big(z, bits), true, bits), &u);
        let theta = bisect(
            |z| {
                let zb = big(z, bits);
                abs_series_eval(&g, &zb, false, bits) / &zb
            },
            &u,
        );
        let tail_ell = tail_estimate(&g, ell, true);
        let tail_theta = tail_estimate(&g, theta, false) / theta;
        if tail_ell <= 0.01 * UNIT_ROUNDOFF && tail_theta <= 0.01 * UNIT_ROUNDOFF {
            return Ok((ell, theta));
        }
        if order > 4000 {
            return Err(Error::InvalidInput(format!("series for m = {m} did not converge by order {order}")));
        }
        order = 2 * order + 1;
    }
}

/// Full table at the given precision.
pub fn derive_table(digits: usize) -> Result<EllTable> {
    let mut t = EllTable {
        ell: [0.0; 5],
        theta: [0.0; 5],
    };
    for (i, &m) in DEGREES.iter().enumerate() {
        let (l, th) = derive_ell_theta(m, digits)?;
        t.ell[i] = l;
        t.theta[i] = th;
    }
    Ok(t)
}
