use num_complex::Complex64;

use super::{ensure_square, Mat};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, UNIT_ROUNDOFF};

/// `M = Q T Q^H` with `Q` unitary and `T` upper (quasi-)triangular.
#[derive(Clone, Debug)]
pub struct SchurForm<T> {
    pub q: Mat<T>,
    pub t: Mat<T>,
    /// `T` carries at least one 2x2 diagonal block (real input only).
    pub is_quasi: bool,
}

/// Householder reduction to upper Hessenberg form, `M = Q H Q^H`.
///
/// Columns whose subdiagonal part is already zero are left untouched, so a
/// triangular input comes back with `Q = I` exactly.
pub fn hessenberg<T: Scalar>(m: &Mat<T>) -> Result<(Mat<T>, Mat<T>)> {
    ensure_square("hessenberg", m)?;
    let n = m.rows();
    let mut h = m.clone();
    let mut q = Mat::identity(n);
    if n < 3 {
        return Ok((h, q));
    }
    let mut v = vec![T::zero(); n];
    for k in 0..n - 2 {
        let tail_zero = (k + 2..n).all(|i| h[(i, k)] == T::zero());
        if tail_zero {
            continue;
        }
        let len = n - k - 1;
        let x0 = h[(k + 1, k)];
        let alpha = (k + 1..n).map(|i| h[(i, k)].modulus().powi(2)).sum::<f64>().sqrt();
        let x0abs = x0.modulus();
        let phase = if x0abs == 0.0 { T::one() } else { x0.mul_real(1.0 / x0abs) };
        let beta = 1.0 / (alpha * (alpha + x0abs));
        let v = &mut v[..len];
        v[0] = x0 + phase.mul_real(alpha);
        for i in 1..len {
            v[i] = h[(k + 1 + i, k)];
        }
        // H <- P H on rows k+1.., P = I - beta v v^H.
        for j in k..n {
            let mut s = T::zero();
            for i in 0..len {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            let s = s.mul_real(beta);
            for i in 0..len {
                h[(k + 1 + i, j)] -= s * v[i];
            }
        }
        // H <- H P and Q <- Q P on columns k+1..
        for target in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = T::zero();
                for jj in 0..len {
                    s += target[(i, k + 1 + jj)] * v[jj];
                }
                let s = s.mul_real(beta);
                for jj in 0..len {
                    target[(i, k + 1 + jj)] -= s * v[jj].conj();
                }
            }
        }
        h[(k + 1, k)] = -phase.mul_real(alpha);
        for i in k + 2..n {
            h[(i, k)] = T::zero();
        }
    }
    Ok((h, q))
}

fn deflation_index<T: Scalar>(h: &mut Mat<T>, hi: usize, hnorm: f64) -> usize {
    let mut l = hi;
    while l > 0 {
        let s = h[(l - 1, l - 1)].modulus() + h[(l, l)].modulus();
        let s = if s == 0.0 { hnorm } else { s };
        if h[(l, l - 1)].modulus() <= UNIT_ROUNDOFF * s {
            h[(l, l - 1)] = T::zero();
            break;
        }
        l -= 1;
    }
    l
}

/// Real Schur decomposition: Hessenberg reduction followed by Francis
/// double-shift QR. 2x2 diagonal blocks are standardized; blocks with real
/// eigenvalues are split so every remaining bump has a complex pair.
pub fn schur_real(m: &Mat<f64>) -> Result<SchurForm<f64>> {
    let (mut h, mut q) = hessenberg(m)?;
    let n = h.rows();
    let hnorm = h.norm_fro();
    let max_iter = 30 * n.max(1);
    let mut total = 0;
    let mut iter = 0;
    let mut hi = n.saturating_sub(1);
    while hi > 0 {
        let l = deflation_index(&mut h, hi, hnorm);
        if l == hi {
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter = 0;
            continue;
        }
        if l + 1 == hi {
            standardize_block(&mut h, &mut q, l);
            if hi < 2 {
                break;
            }
            hi -= 2;
            iter = 0;
            continue;
        }
        total += 1;
        iter += 1;
        if total > max_iter {
            return Err(Error::NoConvergence {
                iterations: total,
                lo: l,
                hi,
            });
        }
        let (tr, det) = if iter % 10 == 0 {
            // Exceptional shift, alternating between the bottom and the top of the window.
            let (s, base) = if iter % 20 == 0 {
                (h[(l + 1, l)].abs() + h[(l + 2, l + 1)].abs(), h[(l, l)])
            } else {
                (h[(hi, hi - 1)].abs() + h[(hi - 1, hi - 2)].abs(), h[(hi, hi)])
            };
            let h11 = 0.75 * s + base;
            (2.0 * h11, h11 * h11 + 0.4375 * s * s)
        } else {
            let (a, b, c, d) = (h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            (a + d, a * d - b * c)
        };
        francis_step(&mut h, &mut q, l, hi, tr, det);
    }
    for j in 0..n {
        for i in j + 2..n {
            h[(i, j)] = 0.0;
        }
    }
    let is_quasi = (1..n).any(|i| h[(i, i - 1)] != 0.0);
    Ok(SchurForm { q, t: h, is_quasi })
}

/// Householder vector for a short real vector: `(I - beta v v^T) x = -sign(x0) |x| e1`.
fn house(x: &[f64]) -> ([f64; 3], f64) {
    let alpha = x.iter().map(|t| t * t).sum::<f64>().sqrt();
    let mut v = [0.0; 3];
    if alpha == 0.0 {
        return (v, 0.0);
    }
    v[..x.len()].copy_from_slice(x);
    let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += sign * alpha;
    let beta = 1.0 / (alpha * (alpha + x[0].abs()));
    (v, beta)
}

fn reflect_rows(h: &mut Mat<f64>, r0: usize, len: usize, v: &[f64; 3], beta: f64, cols: std::ops::Range<usize>) {
    for j in cols {
        let mut s = 0.0;
        for t in 0..len {
            s += v[t] * h[(r0 + t, j)];
        }
        s *= beta;
        for t in 0..len {
            h[(r0 + t, j)] -= s * v[t];
        }
    }
}

fn reflect_cols(h: &mut Mat<f64>, c0: usize, len: usize, v: &[f64; 3], beta: f64, rows: std::ops::Range<usize>) {
    for i in rows {
        let mut s = 0.0;
        for t in 0..len {
            s += h[(i, c0 + t)] * v[t];
        }
        s *= beta;
        for t in 0..len {
            h[(i, c0 + t)] -= s * v[t];
        }
    }
}

fn francis_step(h: &mut Mat<f64>, q: &mut Mat<f64>, l: usize, hi: usize, tr: f64, det: f64) {
    let n = h.rows();
    let mut x = h[(l, l)] * h[(l, l)] + h[(l, l + 1)] * h[(l + 1, l)] - tr * h[(l, l)] + det;
    let mut y = h[(l + 1, l)] * (h[(l, l)] + h[(l + 1, l + 1)] - tr);
    let mut z = h[(l + 1, l)] * h[(l + 2, l + 1)];
    for k in l..=hi - 2 {
        let (v, beta) = house(&[x, y, z]);
        if beta != 0.0 {
            let c0 = if k > l { k - 1 } else { l };
            reflect_rows(h, k, 3, &v, beta, c0..n);
            reflect_cols(h, k, 3, &v, beta, 0..(k + 4).min(hi + 1));
            reflect_cols(q, k, 3, &v, beta, 0..n);
            if k > l {
                h[(k + 1, k - 1)] = 0.0;
                h[(k + 2, k - 1)] = 0.0;
            }
        }
        x = h[(k + 1, k)];
        y = h[(k + 2, k)];
        if k + 3 <= hi {
            z = h[(k + 3, k)];
        }
    }
    let (v, beta) = house(&[x, y]);
    if beta != 0.0 {
        reflect_rows(h, hi - 1, 2, &v, beta, hi - 2..n);
        reflect_cols(h, hi - 1, 2, &v, beta, 0..hi + 1);
        reflect_cols(q, hi - 1, 2, &v, beta, 0..n);
        h[(hi, hi - 2)] = 0.0;
    }
}

fn sign1(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Schur factorization of a real 2x2 block in standard form (LAPACK `dlanv2`).
/// Returns the new block `(a, b, c, d)` and the rotation `(cs, sn)` with
/// `[a b; c d]_old = [cs -sn; sn cs] [a b; c d]_new [cs sn; -sn cs]`.
pub(crate) fn lanv2(mut a: f64, mut b: f64, mut c: f64, mut d: f64) -> ([f64; 4], f64, f64) {
    const MULTPL: f64 = 4.0;
    let eps = f64::EPSILON;
    let (mut cs, mut sn);
    if c == 0.0 {
        cs = 1.0;
        sn = 0.0;
    } else if b == 0.0 {
        cs = 0.0;
        sn = 1.0;
        std::mem::swap(&mut a, &mut d);
        b = -c;
        c = 0.0;
    } else if a - d == 0.0 && sign1(b) != sign1(c) {
        cs = 1.0;
        sn = 0.0;
    } else {
        let temp = a - d;
        let mut p = 0.5 * temp;
        let bcmax = b.abs().max(c.abs());
        let bcmis = b.abs().min(c.abs()) * sign1(b) * sign1(c);
        let scale = p.abs().max(bcmax);
        let mut z = (p / scale) * p + (bcmax / scale) * bcmis;
        if z >= MULTPL * eps {
            // Real eigenvalues.
            z = p + (scale.sqrt() * z.sqrt()).copysign(p);
            a = d + z;
            d -= (bcmax / z) * bcmis;
            let tau = c.hypot(z);
            cs = z / tau;
            sn = c / tau;
            b -= c;
            c = 0.0;
        } else {
            // Complex or nearly equal real eigenvalues: equalize the diagonal.
            let sigma = b + c;
            let tau = sigma.hypot(temp);
            cs = (0.5 * (1.0 + sigma.abs() / tau)).sqrt();
            sn = -(p / (tau * cs)) * sign1(sigma);
            let aa = a * cs + b * sn;
            let bb = -a * sn + b * cs;
            let cc = c * cs + d * sn;
            let dd = -c * sn + d * cs;
            a = aa * cs + cc * sn;
            b = bb * cs + dd * sn;
            c = -aa * sn + cc * cs;
            d = -bb * sn + dd * cs;
            let mid = 0.5 * (a + d);
            a = mid;
            d = mid;
            if c != 0.0 {
                if b != 0.0 {
                    if sign1(b) == sign1(c) {
                        // Real eigenvalues after all: reduce to upper triangular.
                        let sab = b.abs().sqrt();
                        let sac = c.abs().sqrt();
                        p = (sab * sac).copysign(c);
                        let tau = 1.0 / (b + c).abs().sqrt();
                        a = mid + p;
                        d = mid - p;
                        b -= c;
                        c = 0.0;
                        let cs1 = sab * tau;
                        let sn1 = sac * tau;
                        let t = cs * cs1 - sn * sn1;
                        sn = cs * sn1 + sn * cs1;
                        cs = t;
                    }
                } else {
                    b = -c;
                    c = 0.0;
                    let t = cs;
                    cs = -sn;
                    sn = t;
                }
            }
        }
    }
    ([a, b, c, d], cs, sn)
}

fn standardize_block(h: &mut Mat<f64>, q: &mut Mat<f64>, k: usize) {
    let n = h.rows();
    let ([a, b, c, d], cs, sn) = lanv2(h[(k, k)], h[(k, k + 1)], h[(k + 1, k)], h[(k + 1, k + 1)]);
    h[(k, k)] = a;
    h[(k, k + 1)] = b;
    h[(k + 1, k)] = c;
    h[(k + 1, k + 1)] = d;
    for j in k + 2..n {
        let (x, y) = (h[(k, j)], h[(k + 1, j)]);
        h[(k, j)] = cs * x + sn * y;
        h[(k + 1, j)] = cs * y - sn * x;
    }
    rotate_cols(h, k, cs, sn, 0..k);
    rotate_cols(q, k, cs, sn, 0..n);
}

fn rotate_cols(m: &mut Mat<f64>, k: usize, cs: f64, sn: f64, rows: std::ops::Range<usize>) {
    for i in rows {
        let (x, y) = (m[(i, k)], m[(i, k + 1)]);
        m[(i, k)] = cs * x + sn * y;
        m[(i, k + 1)] = cs * y - sn * x;
    }
}

/// Complex Schur decomposition: Hessenberg reduction followed by
/// single-shift QR with Wilkinson shifts. `T` is upper triangular.
pub fn schur_complex(m: &Mat<Complex64>) -> Result<SchurForm<Complex64>> {
    let (mut h, mut q) = hessenberg(m)?;
    let n = h.rows();
    let hnorm = h.norm_fro();
    let max_iter = 30 * n.max(1);
    let mut total = 0;
    let mut iter = 0;
    let mut hi = n.saturating_sub(1);
    while hi > 0 {
        let l = deflation_index(&mut h, hi, hnorm);
        if l == hi {
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter = 0;
            continue;
        }
        total += 1;
        iter += 1;
        if total > max_iter {
            return Err(Error::NoConvergence {
                iterations: total,
                lo: l,
                hi,
            });
        }
        let shift = if iter % 10 == 0 {
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep_complex(&mut h, &mut q, l, hi, shift);
    }
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(SchurForm { q, t: h, is_quasi: false })
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let disc = (p * p + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (m1, m2) = (mid + disc, mid - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Rotation `G = [c s; -conj(s) c]` with real `c` and `G [x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let phase = x / ax;
    (ax / r, phase * y.conj() / r)
}

fn qr_sweep_complex(h: &mut Mat<Complex64>, q: &mut Mat<Complex64>, l: usize, hi: usize, shift: Complex64) {
    let n = h.rows();
    let mut x = h[(l, l)] - shift;
    let mut y = h[(l + 1, l)];
    for k in l..hi {
        if k > l {
            x = h[(k, k - 1)];
            y = h[(k + 1, k - 1)];
        }
        let (c, s) = givens(x, y);
        let c0 = if k > l { k - 1 } else { l };
        for j in c0..n {
            let (a, b) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = a * c + s * b;
            h[(k + 1, j)] = -s.conj() * a + b * c;
        }
        if k > l {
            h[(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
        }
        let rmax = (k + 2).min(hi);
        for i in 0..=rmax {
            let (a, b) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = a * c + s.conj() * b;
            h[(i, k + 1)] = -s * a + b * c;
        }
        for i in 0..n {
            let (a, b) = (q[(i, k)], q[(i, k + 1)]);
            q[(i, k)] = a * c + s.conj() * b;
            q[(i, k + 1)] = -s * a + b * c;
        }
    }
}
