use super::big::{abs, big, is_zero, one, to_f64, zero, BigComplex, BigFloat};
use super::matrix::BigMatrix;
use crate::densela::Mat;
use crate::error::{Error, Result};

/// `p(z)` and `p'(z)` by Horner's rule; `coeffs` in ascending order.
fn horner(coeffs: &[BigFloat], z: &BigComplex, bits: usize) -> (BigComplex, BigComplex) {
    let mut p = BigComplex::real(zero(bits));
    let mut dp = BigComplex::real(zero(bits));
    for c in coeffs.iter().rev() {
        dp = &(&dp * z) + &p;
        p = &(&p * z) + &BigComplex::real(c.clone());
    }
    (p, dp)
}

/// All roots of a real polynomial (ascending coefficients, nonzero leading
/// term) by the Aberth–Ehrlich simultaneous iteration.
pub fn poly_roots(coeffs: &[BigFloat], bits: usize) -> Result<Vec<BigComplex>> {
    let mut coeffs: Vec<BigFloat> = coeffs.to_vec();
    while coeffs.len() > 1 && is_zero(coeffs.last().expect("non-empty")) {
        coeffs.pop();
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n].clone();
    let monic: Vec<BigFloat> = coeffs.iter().map(|c| c / &lead).collect();
    // Initial guesses on a circle whose radius is the geometric mean of the roots.
    let a0 = to_f64(&abs(&monic[0]));
    let radius = if a0 > 0.0 { a0.powf(1.0 / n as f64) } else { 1.0 };
    let radius = radius.clamp(1e-6, 1e6);
    let mut z: Vec<BigComplex> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            BigComplex::from_f64(radius * ang.cos(), radius * ang.sin(), bits)
        })
        .collect();
    let tol = 2f64.powi(-(bits as i32 - 16).max(40));
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&monic, &z[i], bits);
            if is_zero(&p.re) && is_zero(&p.im) {
                continue;
            }
            let w = p.div(&dp);
            let mut s = BigComplex::real(zero(bits));
            for j in 0..n {
                if j != i {
                    s = &s + &BigComplex::real(one(bits)).div(&(&z[i] - &z[j]));
                }
            }
            let denom = &BigComplex::real(one(bits)) - &(&w * &s);
            let step = w.div(&denom);
            let zi = to_f64(&z[i].abs()).max(1e-300);
            max_step = max_step.max(to_f64(&step.abs()) / zi);
            z[i] = &z[i] - &step;
        }
        if max_step < tol {
            return Ok(z);
        }
    }
    Err(Error::RootFinding { degree: n })
}

/// Characteristic polynomial `det(zI - M)` (ascending coefficients) by the
/// Faddeev–LeVerrier recurrence.
pub fn charpoly(m: &BigMatrix) -> Vec<BigFloat> {
    let n = m.rows();
    let bits = m.bits();
    let mut c = vec![zero(bits); n + 1];
    c[n] = one(bits);
    let mut mk = BigMatrix::zeros(n, n, bits);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        next.add_diag(&c[n - k + 1]);
        let am = m.mul(&next);
        let mut tr = zero(bits);
        for i in 0..n {
            tr += am.get(i, i);
        }
        c[n - k] = -(tr / big(k as f64, bits));
        mk = next;
    }
    c
}

/// Eigenvalues of a double matrix computed in `bits` precision, sorted by
/// real part then imaginary part.
pub fn eigenvalues_ref(m: &Mat<f64>, bits: usize) -> Result<Vec<(f64, f64)>> {
    let cp = charpoly(&BigMatrix::from_f64(m, bits));
    let mut ev: Vec<(f64, f64)> = poly_roots(&cp, bits)?.iter().map(BigComplex::to_f64_pair).collect();
    ev.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(ev)
}

/// Solve `M x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(m: &[Vec<BigFloat>], b: &[BigFloat]) -> Vec<BigFloat> {
    let n = b.len();
    let mut a: Vec<Vec<BigFloat>> = m.to_vec();
    let mut x: Vec<BigFloat> = b.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| abs(&a[i][k]).partial_cmp(&abs(&a[j][k])).expect("ordered"))
            .expect("non-empty");
        a.swap(k, p);
        x.swap(k, p);
        let (pivot, below) = a.split_at_mut(k + 1);
        let rk = &pivot[k];
        for (off, ri) in below.iter_mut().enumerate() {
            let i = k + 1 + off;
            let f = &ri[k] / &rk[k];
            for (v, p) in ri[k..].iter_mut().zip(&rk[k..]) {
                *v = &*v - &f * p;
            }
            let v = &x[i] - &f * &x[k];
            x[i] = v;
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k].clone();
        for j in k + 1..n {
            s -= &a[k][j] * &x[j];
        }
        x[k] = s / &a[k][k];
    }
    x
}
