//! Truncated power series in high precision.

use super::big::{abs, big, one, zero, BigFloat};
use super::poly::solve_dense;

/// Padé numerator coefficients `c_0..c_m` of `e^z`.
pub fn pade_numerator(m: usize, bits: usize) -> Vec<BigFloat> {
    let mut c = vec![one(bits)];
    for k in 1..=m {
        let f = big((m - k + 1) as f64, bits) / big(((2 * m - k + 1) * k) as f64, bits);
        let next = &c[k - 1] * &f;
        c.push(next);
    }
    c
}

/// Coefficients of `f * g` up to `z^order`.
pub fn mul(f: &[BigFloat], g: &[BigFloat], order: usize, bits: usize) -> Vec<BigFloat> {
    let mut out = vec![zero(bits); order + 1];
    for (i, fi) in f.iter().enumerate().take(order + 1) {
        for (j, gj) in g.iter().enumerate().take(order + 1 - i) {
            out[i + j] = &out[i + j] + fi * gj;
        }
    }
    out
}

/// Coefficients of `f / g` up to `z^order`; requires `g_0 != 0`.
pub fn div(f: &[BigFloat], g: &[BigFloat], order: usize, bits: usize) -> Vec<BigFloat> {
    let mut out = vec![zero(bits); order + 1];
    for k in 0..=order {
        let mut s = f.get(k).cloned().unwrap_or_else(|| zero(bits));
        for j in 1..=k.min(g.len().saturating_sub(1)) {
            s -= &g[j] * &out[k - j];
        }
        out[k] = s / &g[0];
    }
    out
}

/// `log f` for `f_0 = 1`, via `(log f)' = f'/f`.
pub fn log1(f: &[BigFloat], order: usize, bits: usize) -> Vec<BigFloat> {
    let df: Vec<BigFloat> = (1..f.len()).map(|k| &f[k] * big(k as f64, bits)).collect();
    let h = div(&df, f, order.saturating_sub(1), bits);
    let mut out = vec![zero(bits); order + 1];
    for k in 1..=order {
        out[k] = &h[k - 1] / big(k as f64, bits);
    }
    out
}

/// Coefficients of `g_{2m+1}(z) = log(e^{-z} r_m(z))` up to `z^order`.
///
/// With `q_m(z) = p_m(-z)`, `g = -z + log p_m(z) - log p_m(-z)` is odd and
/// its coefficients below `z^{2m+1}` vanish; they are set to exact zeros.
pub fn pade_log_series(m: usize, order: usize, bits: usize) -> Vec<BigFloat> {
    let lp = log1(&pade_numerator(m, bits), order, bits);
    let mut g = vec![zero(bits); order + 1];
    for j in (1..=order).step_by(2) {
        g[j] = &lp[j] + &lp[j];
    }
    g[1] = &g[1] - one(bits);
    for gj in g.iter_mut().take((2 * m + 1).min(order + 1)) {
        *gj = zero(bits);
    }
    g
}

/// `sum_j |g_j| z^j`, or its derivative `sum_j j |g_j| z^{j-1}`.
pub fn abs_series_eval(g: &[BigFloat], z: &BigFloat, derivative: bool, bits: usize) -> BigFloat {
    let coef: Vec<BigFloat> = if derivative {
        g.iter().enumerate().skip(1).map(|(j, gj)| abs(gj) * big(j as f64, bits)).collect()
    } else {
        g.iter().map(abs).collect()
    };
    let mut acc = zero(bits);
    for c in coef.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Maclaurin coefficients of `tau(z) = tanh(z)/z` in the variable `w = z^2`,
/// from `sinh(z)/z = sum w^k/(2k+1)!` and `cosh(z) = sum w^k/(2k)!`.
pub fn tau_series(terms: usize, bits: usize) -> Vec<BigFloat> {
    let (s, c) = sinhc_cosh_series(terms, bits);
    div(&s, &c, terms - 1, bits)
}

fn sinhc_cosh_series(terms: usize, bits: usize) -> (Vec<BigFloat>, Vec<BigFloat>) {
    let mut fact = vec![one(bits)];
    for k in 1..=2 * terms + 1 {
        let next = &fact[k - 1] * big(k as f64, bits);
        fact.push(next);
    }
    let s = (0..terms).map(|k| one(bits) / &fact[2 * k + 1]).collect();
    let c = (0..terms).map(|k| one(bits) / &fact[2 * k]).collect();
    (s, c)
}

/// `[4/4]` Padé approximant `P(w)/Q(w)` of `tau` in `w = z^2`, normalized so
/// that `P(0) = Q(0) = 1`. This is the `[8/8]` approximant in `z`.
pub fn tau_pade44(bits: usize) -> (Vec<BigFloat>, Vec<BigFloat>) {
    let t = tau_series(9, bits);
    // sum_{j=0}^{4} q_j t_{k-j} = 0 for k = 5..8 with q_0 = 1.
    let rows: Vec<Vec<BigFloat>> = (5..=8).map(|k| (1..=4).map(|j| t[k - j].clone()).collect()).collect();
    let rhs: Vec<BigFloat> = (5..=8).map(|k| -t[k].clone()).collect();
    let mut q = vec![one(bits)];
    q.extend(solve_dense(&rows, &rhs));
    let p: Vec<BigFloat> = (0..=4)
        .map(|k| {
            let mut s = zero(bits);
            for j in 0..=k {
                s += &q[j] * &t[k - j];
            }
            s
        })
        .collect();
    (p, q)
}

/// `tau(iy) = tan(y)/y` summed from the series of `sin(y)/y` and `cos(y)`.
pub fn tau_imag(y: &BigFloat, bits: usize) -> BigFloat {
    let (s, c) = sinhc_cosh_series(60, bits);
    let w = -(y * y);
    let eval = |coef: &[BigFloat]| {
        let mut acc = zero(bits);
        for ck in coef.iter().rev() {
            acc = acc * &w + ck;
        }
        acc
    };
    eval(&s) / eval(&c)
}
