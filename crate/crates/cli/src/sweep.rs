//! `L_exp(T, -T^T, alpha_k H)` for `alpha_k = 2^(200(k-3))`, `k = 0..6`.

use std::fmt::Write as _;

use blockexp::expm::scale_pow2;
use blockexp::oracle::{lexp_ref, rel_err};
use blockexp::Mat;

use crate::compute::{self, Method, SchurFlag};
use crate::error::Result;
use crate::gen;

pub const METHODS: [Method; 3] = [Method::Alg41, Method::Kl, Method::BlockEmbed];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub t: i64,
    /// Relative errors in `METHODS` order; infinite when a method failed.
    pub errors: [f64; 3],
}

/// The gallery pair, or with a seed a stable triangular `T` and random symmetric `H`.
pub fn pair(n: usize, seed: Option<u64>) -> Result<(Mat<f64>, Mat<f64>)> {
    match seed {
        None => gen::generate_pair(n),
        Some(s) => Ok((
            gen::generate(gen::Kind::StableTri, n, s)?,
            gen::generate(gen::Kind::Symm, n, s.wrapping_add(1))?,
        )),
    }
}

pub fn sweep(t: &Mat<f64>, h: &Mat<f64>, digits: usize) -> Result<Vec<SweepRow>> {
    let b = t.transpose().scale(-1.0);
    let mut rows = Vec::new();
    for k in 0..=6i64 {
        let tk = 200 * (k - 3);
        let e = scale_pow2(h, tk);
        let exact = lexp_ref(t, &b, &e, digits);
        let mut errors = [f64::INFINITY; 3];
        for (slot, method) in errors.iter_mut().zip(METHODS) {
            if let Ok(c) = compute::run_with(method, t, &b, &e, SchurFlag::Auto, digits, false) {
                if c.d.is_finite() {
                    *slot = rel_err(&c.d, &exact);
                }
            }
        }
        rows.push(SweepRow { t: tk, errors });
    }
    Ok(rows)
}

pub fn table(rows: &[SweepRow]) -> String {
    let mut out = format!("{:>6} {:>12} {:>12} {:>12}\n", "t_k", "alg41", "kl", "block-embed");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>6} {:>12.3e} {:>12.3e} {:>12.3e}",
            r.t, r.errors[0], r.errors[1], r.errors[2]
        );
    }
    out
}
