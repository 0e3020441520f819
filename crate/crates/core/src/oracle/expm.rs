use num_complex::Complex64;

use super::big::{abs, big, digits_to_bits, one, to_f64, zero, BigFloat};
use super::matrix::{block_upper, BigMatrix};
use crate::densela::Mat;

/// Upper bound on the working precision in bits for an exponential of a
/// matrix with infinity norm `norm`: `digits`, 20 guard digits, and enough
/// headroom for any cancellation in the squarings.
pub fn working_bits(digits: usize, norm: f64) -> usize {
    digits_to_bits(digits + 20 + headroom_digits(norm))
}

fn headroom_digits(norm: f64) -> usize {
    if norm.is_finite() {
        (2.0 * norm * std::f64::consts::LOG10_E).ceil() as usize
    } else {
        0
    }
}

/// Number of Taylor terms `K` so that the tail after `x^K / K!` is below `tol`,
/// for an argument of norm `theta < 1`.
fn taylor_terms(theta: f64, tol_log10: f64) -> usize {
    if theta == 0.0 {
        return 1;
    }
    let mut log_term = 0.0; // log10(theta^k / k!)
    let tail_factor = -(1.0 - theta).log10();
    for k in 1..10_000 {
        log_term += theta.log10() - (k as f64).log10();
        if log_term + tail_factor < tol_log10 {
            return k;
        }
    }
    10_000
}

/// `sum_{k=0}^{K} c_k X^k` by Paterson–Stockmeyer.
fn paterson_stockmeyer(x: &BigMatrix, coeffs: &[BigFloat]) -> BigMatrix {
    let n = x.rows();
    let bits = x.bits();
    let deg = coeffs.len() - 1;
    let q = ((deg + 1) as f64).sqrt().ceil().max(1.0) as usize;
    let mut pows = vec![BigMatrix::identity(n, bits), x.clone()];
    for _ in 2..=q {
        let next = pows.last().expect("non-empty").mul(x);
        pows.push(next);
    }
    let block = |i: usize| -> BigMatrix {
        let mut acc = BigMatrix::zeros(n, n, bits);
        for (j, pw) in pows.iter().enumerate().take(q) {
            let k = i * q + j;
            if k > deg {
                break;
            }
            acc = acc.add(&pw.scale(&coeffs[k]));
        }
        acc
    };
    let r = deg / q;
    let mut acc = block(r);
    for i in (0..r).rev() {
        acc = acc.mul(&pows[q]).add(&block(i));
    }
    acc
}

/// Scaling and squaring at a fixed precision: scale so that
/// `||2^-s M||_inf <= 1/8`, Taylor series, then `s` squarings.
fn expm_fixed(m: &BigMatrix, norm: f64, bits: usize, digits: usize) -> BigMatrix {
    let bits = bits.max(m.bits());
    let mut s: isize = 0;
    let mut theta = norm;
    while theta > 0.125 {
        theta *= 0.5;
        s += 1;
    }
    let x = rebits(m, bits).ldexp(-s);
    let k = taylor_terms(theta, -(digits as f64) - 0.31);
    let mut coeffs = vec![one(bits)];
    for j in 1..=k {
        let next = &coeffs[j - 1] / big(j as f64, bits);
        coeffs.push(next);
    }
    let mut out = paterson_stockmeyer(&x, &coeffs);
    for _ in 0..s {
        out = out.mul(&out);
    }
    out
}

/// Entrywise agreement to `digits` digits, ignoring entries more than
/// `digits` orders of magnitude below the largest.
fn agree(lo: &BigMatrix, hi: &BigMatrix, digits: usize) -> bool {
    let bits = hi.bits();
    let mut tol = one(bits);
    let ten = big(10.0, bits);
    for _ in 0..digits {
        tol = &tol / &ten;
    }
    let mut max = zero(bits);
    for j in 0..hi.cols() {
        for i in 0..hi.rows() {
            let a = abs(hi.get(i, j));
            if a > max {
                max = a;
            }
        }
    }
    let floor = &max * &tol;
    (0..hi.cols()).all(|j| {
        (0..hi.rows()).all(|i| {
            let diff = abs(&(lo.get(i, j) - hi.get(i, j)));
            diff <= &tol * &(&abs(hi.get(i, j)) + &floor)
        })
    })
}

/// Exponential to `digits` significant decimal digits.
///
/// The squarings can lose up to `2 ||M|| log10(e)` digits to cancellation, but
/// rarely lose more than a few. The precision therefore starts with a modest
/// pad and doubles it until two consecutive results agree, never exceeding the
/// a priori bound.
pub fn expm_ref(m: &BigMatrix, digits: usize) -> BigMatrix {
    assert_eq!(m.rows(), m.cols(), "expm_ref needs a square matrix");
    if m.rows() == 0 {
        return BigMatrix::zeros(0, 0, digits_to_bits(digits + 20));
    }
    let norm = m.norm_inf_f64();
    let cap = headroom_digits(norm);
    let mut pad = cap.min(40);
    let run = |pad: usize| expm_fixed(m, norm, digits_to_bits(digits + 20 + pad), digits + 10 + pad);
    let mut prev = run(pad);
    while pad < cap {
        let next_pad = (2 * pad).max(20).min(cap);
        let cur = run(next_pad);
        if agree(&prev, &cur, digits + 3) {
            return cur;
        }
        prev = cur;
        pad = next_pad;
    }
    prev
}

fn rebits(m: &BigMatrix, bits: usize) -> BigMatrix {
    let mut out = BigMatrix::zeros(m.rows(), m.cols(), bits);
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.set(i, j, m.get(i, j).clone().with_precision(bits).value());
        }
    }
    out
}

/// Exponential of a double matrix.
pub fn expm_ref_f64(m: &Mat<f64>, digits: usize) -> BigMatrix {
    expm_ref(&BigMatrix::from_f64(m, digits_to_bits(digits + 20)), digits)
}

/// Reference `(e^A, e^B, L_exp(A, B, E))` from the exponential of `[[A, E], [0, B]]`.
///
/// `L_exp` is linear in `E`, so `E` is first brought to unit size by an exact
/// power of two and the block is scaled back afterwards. This keeps the
/// scaling parameter of the embedded exponential independent of `||E||`.
pub fn lexp_ref_all(a: &Mat<f64>, b: &Mat<f64>, e: &Mat<f64>, digits: usize) -> (BigMatrix, BigMatrix, BigMatrix) {
    let (n, d) = (a.rows(), b.rows());
    let bits = digits_to_bits(digits + 20);
    let enorm = e.norm_inf();
    let k = if enorm > 0.0 && enorm.is_finite() {
        enorm.log2().round() as isize
    } else {
        0
    };
    let e_big = BigMatrix::from_f64(e, bits).ldexp(-k);
    let big_m = block_upper(&BigMatrix::from_f64(a, bits), &BigMatrix::from_f64(b, bits), &e_big);
    let f = expm_ref(&big_m, digits);
    (f.block(0, 0, n, n), f.block(n, n, d, d), f.block(0, n, n, d).ldexp(k))
}

/// Reference `L_exp(A, B, E)`.
pub fn lexp_ref(a: &Mat<f64>, b: &Mat<f64>, e: &Mat<f64>, digits: usize) -> BigMatrix {
    lexp_ref_all(a, b, e, digits).2
}

/// Real `2n x 2n` image `[[Re, -Im], [Im, Re]]` of a complex matrix. The map is
/// an algebra homomorphism, so exponentials commute with it.
pub fn complex_embed(m: &Mat<Complex64>) -> Mat<f64> {
    let (r, c) = m.shape();
    let mut out = Mat::zeros(2 * r, 2 * c);
    for j in 0..c {
        for i in 0..r {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i + r, j + c)] = z.re;
            out[(i, j + c)] = -z.im;
            out[(i + r, j)] = z.im;
        }
    }
    out
}

/// Reference `L_exp(A, B, E)` for complex data, returned as `(Re, Im)`.
pub fn lexp_ref_complex(a: &Mat<Complex64>, b: &Mat<Complex64>, e: &Mat<Complex64>, digits: usize) -> (BigMatrix, BigMatrix) {
    let (n, d) = (a.rows(), b.rows());
    let f = expm_ref_f64(&complex_embed(&Mat::block_upper(a, b, e)), digits);
    let nd = n + d;
    (f.block(0, n, n, d), f.block(nd, n, n, d))
}

/// `phi_j(A) = sum_k A^k / (k + j)!`.
///
/// Summed directly when `||A||_inf <= 1`; otherwise read off the exponential
/// of the augmented matrix with `A` in the corner and identities on the block
/// superdiagonal.
pub fn phi_ref(a: &Mat<f64>, j: usize, digits: usize) -> BigMatrix {
    let n = a.rows();
    let norm = a.norm_inf();
    if j == 0 {
        return expm_ref_f64(a, digits);
    }
    if norm > 1.0 {
        let mut aug = Mat::zeros(n * (j + 1), n * (j + 1));
        aug.set_block(0, 0, a);
        for blk in 0..j {
            aug.set_block(blk * n, (blk + 1) * n, &Mat::identity(n));
        }
        return expm_ref_f64(&aug, digits).block(0, j * n, n, n);
    }
    let bits = working_bits(digits, norm);
    let am = BigMatrix::from_f64(a, bits);
    let mut fact = one(bits);
    for k in 2..=j {
        fact *= big(k as f64, bits);
    }
    let mut term = BigMatrix::identity(n, bits).scale(&(one(bits) / &fact));
    let mut sum = term.clone();
    let tol = 10f64.powf(-(digits as f64) - 10.0);
    for k in 1..100_000 {
        term = am.mul(&term).scale(&(one(bits) / big((k + j) as f64, bits)));
        sum = sum.add(&term);
        let tn = term.norm_inf_f64();
        if tn == 0.0 || tn <= tol * sum.norm_inf_f64() {
            break;
        }
    }
    sum
}

/// Relative error `||approx - exact||_inf / ||exact||_inf` evaluated in the
/// precision of `exact`.
pub fn rel_err(approx: &Mat<f64>, exact: &BigMatrix) -> f64 {
    let bits = exact.bits();
    let diff = BigMatrix::from_f64(approx, bits).sub(exact);
    let den = exact.norm_inf();
    let num = diff.norm_inf();
    if super::big::is_zero(&den) {
        return to_f64(&num);
    }
    to_f64(&(num / den))
}
