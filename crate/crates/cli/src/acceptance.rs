//! The acceptance criteria, each reduced to a pass/fail line with the
//! measured numbers attached.

use std::fmt;
use std::time::Instant;

use blockexp::batch;
use blockexp::densela::{gemm_sequential, schur_real};
use blockexp::expm::{derive_ell_theta, expm_block_tri, scale_pow2, squaring_phase, ExpmOptions, ReplacementContext, ELL_TABLE};
use blockexp::kl::{kl_frechet, tau_pade_gap, KlOptions};
use blockexp::oracle::{expm_ref, lexp_ref, phi_ref, rel_err, BigMatrix};
use blockexp::scalar::UNIT_ROUNDOFF as U;
use blockexp::{apps, Mat, MatmulCounter};

use crate::bench::{self, BenchConfig};
use crate::compute::Method;
use crate::gen::{randn, rng};
use crate::sweep;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2}. {}: {}", self.id, self.title, self.detail)
    }
}

fn outcome(id: usize, title: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome { id, title, passed, detail }
}

fn failure(id: usize, title: &'static str, err: impl fmt::Display) -> Outcome {
    outcome(id, title, false, format!("error: {err}"))
}

pub const TITLES: [&str; 10] = [
    "oracle agreement",
    "cost model",
    "constants",
    "tau Pade quality",
    "alpha sweep",
    "linearity",
    "selection invariance",
    "phi combination",
    "Lemma 2.2 properties",
    "comparative accuracy",
];

pub fn run(id: usize) -> Outcome {
    match id {
        1 => oracle_agreement(),
        2 => cost_model(),
        3 => constants(),
        4 => tau_quality(),
        5 => alpha_sweep(),
        6 => linearity(),
        7 => selection_invariance(),
        8 => phi_combination(),
        9 => lemma_properties(),
        10 => comparative_accuracy(),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_all() -> Vec<Outcome> {
    (1..=10).map(run).collect()
}

fn triple(seed: u64, n: usize, d: usize) -> (Mat<f64>, Mat<f64>, Mat<f64>) {
    let mut r = rng(seed);
    (randn(&mut r, n, n), randn(&mut r, d, d), randn(&mut r, n, d))
}

fn oracle_agreement() -> Outcome {
    let title = TITLES[0];
    let t0 = Instant::now();
    let seeds: Vec<u64> = (1000..1050).collect();
    let errs = batch::map(&seeds, |&seed| {
        let (a, b, e) = triple(seed, 10, 8);
        expm_block_tri(&a, &b, &e, &ExpmOptions::default()).map(|r| rel_err(&r.d, &lexp_ref(&a, &b, &e, 100)))
    });
    let secs = t0.elapsed().as_secs_f64();
    let errs: Vec<f64> = match errs.into_iter().collect() {
        Ok(v) => v,
        Err(e) => return failure(1, title, e),
    };
    let good = errs.iter().filter(|&&x| x <= 1e-13).count();
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    outcome(
        1,
        title,
        good >= 48 && secs < 60.0,
        format!("{good}/50 within 1e-13 (worst {worst:.2e}) in {secs:.1} s"),
    )
}

fn cost_model() -> Outcome {
    let title = TITLES[1];
    let mut r = rng(2);
    let mut seen = Vec::new();
    let mut ok = true;
    for s in 1..=3u32 {
        let a = randn(&mut r, 8, 8);
        let eta = ELL_TABLE.ell[4] * f64::from(1u32 << s) * 0.9;
        let a = a.scale(eta / a.norm_inf());
        let (b, e) = (randn(&mut r, 8, 8).scale(0.1), randn(&mut r, 8, 8));
        match expm_block_tri(&a, &b, &e, &ExpmOptions::default()) {
            Ok(res) => {
                ok &= res.s == s && res.m == 13 && !res.used_schur && res.matmuls == 25 + 4 * s as usize;
                seen.push(format!("s={} -> {} matmuls", res.s, res.matmuls));
            }
            Err(e) => return failure(2, title, e),
        }
    }
    outcome(2, title, ok, seen.join(", "))
}

fn constants() -> Outcome {
    let title = TITLES[2];
    let mut ok = true;
    let mut ell13 = 0.0;
    for (i, m) in [3, 5, 7, 9, 13].into_iter().enumerate() {
        match derive_ell_theta(m, 100) {
            Ok((l, t)) => {
                ok &= l < t && (l / ELL_TABLE.ell[i] - 1.0).abs() < 1e-12;
                if m == 13 {
                    ell13 = l;
                }
            }
            Err(e) => return failure(3, title, e),
        }
    }
    ok &= (ell13 / 4.736 - 1.0).abs() <= 0.02;
    outcome(
        3,
        title,
        ok,
        format!(
            "ell_13 = {ell13:.6}, 2^10 ell_13 = {:.1}, ell_m < theta_m for all m",
            1024.0 * ell13
        ),
    )
}

fn tau_quality() -> Outcome {
    let g = tau_pade_gap(0.25, 100);
    let target = 6.85e-28;
    outcome(
        4,
        TITLES[3],
        g >= target / 10.0 && g <= target * 10.0,
        format!("|g(1/4)| = {g:.4e}"),
    )
}

fn alpha_sweep() -> Outcome {
    let title = TITLES[4];
    let rows = match sweep::pair(8, None).and_then(|(t, h)| sweep::sweep(&t, &h, 100)) {
        Ok(r) => r,
        Err(e) => return failure(5, title, e),
    };
    let col = |j: usize| rows.iter().map(|r| r.errors[j]).collect::<Vec<_>>();
    let (alg, kl, blk) = (col(0), col(1), col(2));
    let constant = |c: &[f64]| c.iter().all(|x| x.to_bits() == c[0].to_bits());
    let last = *blk.last().expect("seven rows");
    let ok = constant(&alg) && alg[0] <= 1e-13 && constant(&kl) && kl[0].is_finite() && !constant(&blk) && last >= 1e6 * alg[0];
    outcome(
        5,
        title,
        ok,
        format!(
            "alg41 {:.3e} (constant: {}), kl {:.3e} (constant: {}), block-embed {:.3e} .. {:.3e}",
            alg[0],
            constant(&alg),
            kl[0],
            constant(&kl),
            blk[0],
            last
        ),
    )
}

fn linearity() -> Outcome {
    let title = TITLES[5];
    let mut checked = 0;
    for seed in 0..20u64 {
        let (a, b, e) = triple(600 + seed, 6, 5);
        let a = a.scale(1.0 + seed as f64);
        let run = |e: &Mat<f64>| -> blockexp::Result<(Mat<f64>, Mat<f64>)> {
            let d1 = expm_block_tri(&a, &b, e, &ExpmOptions::default())?.d;
            let d2 = kl_frechet(&a, &b, e, &KlOptions::default())?.d;
            Ok((d1, d2))
        };
        let (base1, base2) = match run(&e) {
            Ok(v) => v,
            Err(err) => return failure(6, title, err),
        };
        for k in [-200i64, 0, 200] {
            match run(&scale_pow2(&e, k)) {
                Ok((d1, d2)) => {
                    if d1 != scale_pow2(&base1, k) || d2 != scale_pow2(&base2, k) {
                        return outcome(6, title, false, format!("seed {seed}, k = {k}: not bitwise linear"));
                    }
                    checked += 2;
                }
                Err(err) => return failure(6, title, err),
            }
        }
    }
    outcome(
        6,
        title,
        true,
        format!("{checked} bitwise comparisons (alg41 and kl, k = -200, 0, 200)"),
    )
}

fn selection_invariance() -> Outcome {
    let title = TITLES[6];
    for seed in 0..20u64 {
        let (a, b, e) = triple(700 + seed, 5, 4);
        let a = a.scale(0.5 * (seed + 1) as f64);
        let mut seen = Vec::new();
        for f in [1.0, 1e10, 1e-10] {
            match expm_block_tri(&a, &b, &e.scale(f), &ExpmOptions::default()) {
                Ok(r) => seen.push((r.m, r.s)),
                Err(err) => return failure(7, title, err),
            }
        }
        if seen.iter().any(|p| *p != seen[0]) {
            return outcome(7, title, false, format!("seed {seed}: {seen:?}"));
        }
    }
    outcome(7, title, true, "(m, s) unchanged under E -> 10^(+-10) E on 20 triples".into())
}

fn phi_reference(a: &Mat<f64>, w: &[Vec<f64>]) -> Vec<f64> {
    let n = a.rows();
    let mut out = vec![0.0; n];
    for (j, wj) in w.iter().enumerate() {
        let p = phi_ref(a, j, 60).to_f64();
        for (i, o) in out.iter_mut().enumerate() {
            *o += (0..n).map(|k| p[(i, k)] * wj[k]).sum::<f64>();
        }
    }
    out
}

fn vec_rel(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    num / b.iter().map(|y| y.abs()).fold(0.0, f64::max)
}

fn phi_combination() -> Outcome {
    let title = TITLES[7];
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    let mut cases: Vec<(Mat<f64>, Vec<Vec<f64>>)> = vec![
        (Mat::scalar(1.0), vec![vec![0.0], vec![1.0]]),
        (Mat::scalar(-2.5), vec![vec![0.3], vec![-1.0], vec![2.0], vec![0.5]]),
    ];
    for p in 1..=3 {
        let a = randn(&mut r, 5, 5);
        let w = (0..=p).map(|_| randn(&mut r, 5, 1).into_vec()).collect();
        cases.push((a, w));
    }
    for (a, w) in &cases {
        match apps::phi_combination(a, w) {
            Ok(got) => worst = worst.max(vec_rel(&got, &phi_reference(a, w))),
            Err(e) => return failure(8, title, e),
        }
    }
    let w: Vec<Vec<f64>> = (0..3).map(|_| randn(&mut r, 4, 1).into_vec()).collect();
    let zero_ok = match apps::phi_combination(&Mat::zeros(4, 4), &w) {
        Ok(got) => (0..4).all(|i| {
            let exact = w[0][i] + w[1][i] + 0.5 * w[2][i];
            let scale = w[0][i].abs() + w[1][i].abs() + 0.5 * w[2][i].abs();
            (got[i] - exact).abs() <= 2.0 * U * scale
        }),
        Err(e) => return failure(8, title, e),
    };
    outcome(
        8,
        title,
        worst <= 1e-13 && zero_ok,
        format!(
            "worst relative error {worst:.2e} over {} cases; A = 0, p = 2 exact to roundoff: {zero_ok}",
            cases.len()
        ),
    )
}

fn big(m: &Mat<f64>, bits: usize) -> BigMatrix {
    BigMatrix::from_f64(m, bits)
}

/// Worst relative error of each Lemma 2.2 rule, with Algorithm 4.1 supplying
/// `e^A`, `e^B`, `L_exp` in double precision and the oracle as referee.
fn lemma_errors(seed: u64) -> blockexp::Result<[f64; 5]> {
    let (a, b, e) = triple(900 + seed, 3, 3);
    let opts = ExpmOptions::default();
    let res = expm_block_tri(&a, &b, &e, &opts)?;
    let exact = lexp_ref(&a, &b, &e, 100);
    let bits = exact.bits();

    // Sum rule with g(z) = z^2, whose L_g(A, B, E) = AE + EB.
    let lg = &gemm_sequential(&a, &e) + &gemm_sequential(&e, &b);
    let lg_exact = big(&a, bits).mul(&big(&e, bits)).add(&big(&e, bits).mul(&big(&b, bits)));
    let sum = rel_err(&(&res.d + &lg), &exact.add(&lg_exact));

    // Product rule with f = g = exp: L_(e^2z) = e^A L + L e^B.
    let prod = &gemm_sequential(&res.x, &res.d) + &gemm_sequential(&res.d, &res.y);
    let prod = rel_err(&prod, &lexp_ref(&a.scale(2.0), &b.scale(2.0), &e.scale(2.0), 100));

    // Chain rule with f = z^4 applied by two squarings.
    let sq = squaring_phase(
        res.x.clone(),
        res.y.clone(),
        res.d.clone(),
        2,
        &ReplacementContext::none(),
        &MatmulCounter::new(),
    )?;
    let chain = rel_err(&sq.d, &lexp_ref(&a.scale(4.0), &b.scale(4.0), &e.scale(4.0), 100));

    // Similarity through the real Schur forms.
    let (sa, sb) = (schur_real(&a)?, schur_real(&b)?);
    let et = gemm_sequential(&gemm_sequential(&sa.q.transpose(), &e), &sb.q);
    let dt = expm_block_tri(&sa.t, &sb.t, &et, &opts)?.d;
    let sim = rel_err(&gemm_sequential(&gemm_sequential(&sa.q, &dt), &sb.q.transpose()), &exact);

    // L(A, A, E) against a high-precision central difference.
    let da = expm_block_tri(&a, &a, &e, &opts)?.d;
    let fb = lexp_ref(&a, &a, &e, 100).bits() + 300;
    let h = -140;
    let plus = expm_ref(&big(&a, fb).add(&big(&e, fb).ldexp(h)), 190);
    let minus = expm_ref(&big(&a, fb).sub(&big(&e, fb).ldexp(h)), 190);
    let frechet = rel_err(&da, &plus.sub(&minus).ldexp(-h - 1));

    Ok([sum, prod, chain, sim, frechet])
}

fn lemma_properties() -> Outcome {
    let title = TITLES[8];
    let names = ["sum", "product", "chain", "similarity", "Frechet"];
    let mut worst = [0.0f64; 5];
    for seed in 0..5 {
        match lemma_errors(seed) {
            Ok(errs) => {
                for (w, x) in worst.iter_mut().zip(errs) {
                    *w = w.max(x);
                }
            }
            Err(e) => return failure(9, title, e),
        }
    }
    let detail: Vec<String> = names.iter().zip(&worst).map(|(n, w)| format!("{n} {:.1}u", w / U)).collect();
    outcome(
        9,
        title,
        worst.iter().all(|w| *w <= 100.0 * U),
        format!("worst over 5 triples: {}", detail.join(", ")),
    )
}

/// Configuration used for the comparative-accuracy criterion.
pub fn comparison_config() -> BenchConfig {
    BenchConfig {
        count: 40,
        n_a: 10,
        n_b: 8,
        seed: 2025,
        methods: vec![Method::Alg41, Method::Kl, Method::BlockEmbed],
        oracle_digits: 100,
    }
}

fn comparative_accuracy() -> Outcome {
    let title = TITLES[9];
    let cfg = comparison_config();
    let records = match bench::run(&cfg) {
        Ok(r) => r,
        Err(e) => return failure(10, title, e),
    };
    let table = bench::error_table(&records, &cfg.methods);
    let alphas = bench::alpha_grid();
    let prof = bench::profile(&table, &alphas);
    let within2 = bench::profile(&table, &[2.0])[0][0];
    let dominates = prof.iter().all(|row| row[0] >= row[1]);
    let at2 = |j: usize| bench::profile(&table, &[2.0])[0][j];
    outcome(
        10,
        title,
        within2 >= 0.7 && dominates,
        format!(
            "p(2): alg41 {:.2}, kl {:.2}, block-embed {:.2}; alg41 >= kl at all {} alphas: {dominates}",
            within2,
            at2(1),
            at2(2),
            alphas.len()
        ),
    )
}
