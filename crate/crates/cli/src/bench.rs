//! Seeded random triples through several methods, scored against the oracle.

use std::time::Instant;

use blockexp::oracle::{lexp_ref, rel_err};
use blockexp::scalar::UNIT_ROUNDOFF;
use blockexp::Mat;
use rand::Rng;

use crate::compute::{self, Method, SchurFlag};
use crate::error::{CliError, Result};
use crate::gen::{self, Kind};

/// Kinds the diagonal blocks are drawn from.
pub const POOL: [Kind; 4] = [Kind::Randn, Kind::StableTri, Kind::Symm, Kind::Chebspec];

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub count: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub oracle_digits: usize,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub id: usize,
    pub kind_a: Kind,
    pub kind_b: Kind,
    pub a: Mat<f64>,
    pub b: Mat<f64>,
    pub e: Mat<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub problem: usize,
    pub method: Method,
    /// Relative inf-norm error of `D`; infinite for a failed run.
    pub rel_err: f64,
    pub m: Option<usize>,
    pub s: Option<u32>,
    pub matmuls: Option<usize>,
    pub failure: Option<String>,
    pub seconds: f64,
}

pub fn problem(cfg: &BenchConfig, id: usize) -> Problem {
    let mut r = gen::rng(cfg.seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let kind_a = POOL[r.random_range(0..POOL.len())];
    let kind_b = POOL[r.random_range(0..POOL.len())];
    let (sa, sb) = (r.random::<u64>(), r.random::<u64>());
    let e = gen::randn(&mut r, cfg.n_a, cfg.n_b);
    Problem {
        id,
        kind_a,
        kind_b,
        a: gen::generate(kind_a, cfg.n_a, sa).expect("pool kinds are single matrices"),
        b: gen::generate(kind_b, cfg.n_b, sb).expect("pool kinds are single matrices"),
        e,
    }
}

fn diag_value<T: std::str::FromStr>(c: &compute::Computed, key: &str) -> Option<T> {
    c.diag.iter().find(|(k, _)| *k == key).and_then(|(_, v)| v.parse().ok())
}

fn run_problem(cfg: &BenchConfig, p: &Problem) -> Vec<BenchRecord> {
    let exact = lexp_ref(&p.a, &p.b, &p.e, cfg.oracle_digits);
    cfg.methods
        .iter()
        .map(|&method| {
            let t0 = Instant::now();
            let out = compute::run_with(method, &p.a, &p.b, &p.e, SchurFlag::Auto, cfg.oracle_digits, false);
            let seconds = t0.elapsed().as_secs_f64();
            match out {
                Ok(c) if c.d.is_finite() => BenchRecord {
                    problem: p.id,
                    method,
                    rel_err: rel_err(&c.d, &exact),
                    m: diag_value(&c, "m"),
                    s: diag_value(&c, "s"),
                    matmuls: diag_value(&c, "matmuls"),
                    failure: None,
                    seconds,
                },
                Ok(_) => failed(p.id, method, "non-finite result".into(), seconds),
                Err(e) => failed(p.id, method, e.to_string(), seconds),
            }
        })
        .collect()
}

fn failed(problem: usize, method: Method, msg: String, seconds: f64) -> BenchRecord {
    BenchRecord {
        problem,
        method,
        rel_err: f64::INFINITY,
        m: None,
        s: None,
        matmuls: None,
        failure: Some(msg),
        seconds,
    }
}

pub fn validate(cfg: &BenchConfig) -> Result<()> {
    if cfg.count == 0 || cfg.n_a == 0 || cfg.n_b == 0 {
        return Err(CliError::Usage("count, nA and nB must be positive".into()));
    }
    if cfg.methods.is_empty() || cfg.methods.contains(&Method::Oracle) {
        return Err(CliError::Usage("methods must be a non-empty subset of alg41, kl, block".into()));
    }
    if cfg.oracle_digits < 50 {
        return Err(CliError::Usage("oracle digits must be at least 50".into()));
    }
    Ok(())
}

/// All records, ordered by problem id then by the order of `cfg.methods`.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    validate(cfg)?;
    let ids: Vec<usize> = (0..cfg.count).collect();
    let per_problem = blockexp::batch::map(&ids, |&id| run_problem(cfg, &problem(cfg, id)));
    Ok(per_problem.into_iter().flatten().collect())
}

/// Errors below `u` are indistinguishable from exact in double precision.
pub fn floored(err: f64) -> f64 {
    err.max(UNIT_ROUNDOFF)
}

/// `alpha = 2^(k/4)`, `k = 0..=24`: a log grid on `[1, 64]`.
pub fn alpha_grid() -> Vec<f64> {
    (0..=24).map(|k| (k as f64 / 4.0).exp2()).collect()
}

/// Per-problem floored errors, one row per problem, columns in method order.
pub fn error_table(records: &[BenchRecord], methods: &[Method]) -> Vec<Vec<f64>> {
    let count = records.iter().map(|r| r.problem + 1).max().unwrap_or(0);
    let mut t = vec![vec![f64::INFINITY; methods.len()]; count];
    for r in records {
        if let Some(j) = methods.iter().position(|m| *m == r.method) {
            t[r.problem][j] = floored(r.rel_err);
        }
    }
    t
}

/// `p_j(alpha)`: fraction of problems where method `j` is within `alpha` of
/// the best method. Problems on which every method failed count for nobody.
pub fn profile(table: &[Vec<f64>], alphas: &[f64]) -> Vec<Vec<f64>> {
    let n = table.len().max(1) as f64;
    alphas
        .iter()
        .map(|&alpha| {
            let cols = table.first().map_or(0, Vec::len);
            (0..cols)
                .map(|j| {
                    let hits = table
                        .iter()
                        .filter(|row| {
                            let best = row.iter().cloned().fold(f64::INFINITY, f64::min);
                            best.is_finite() && row[j] <= alpha * best
                        })
                        .count();
                    hits as f64 / n
                })
                .collect()
        })
        .collect()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io {
        path: "<csv>".into(),
        line: None,
        msg: e.to_string(),
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| csv_err(e.into_error().into()))
}

/// Records without timings: identical flags give identical bytes.
pub fn records_csv(records: &[BenchRecord], cfg: &BenchConfig) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["problem", "method", "kind_a", "kind_b", "rel_err", "m", "s", "matmuls", "status"])
        .map_err(csv_err)?;
    for r in records {
        let p = problem(cfg, r.problem);
        let status = r.failure.as_ref().map_or("ok".to_string(), |f| format!("fail: {f}"));
        w.write_record([
            r.problem.to_string(),
            r.method.name().to_string(),
            p.kind_a.name().to_string(),
            p.kind_b.name().to_string(),
            format!("{:e}", r.rel_err),
            opt(&r.m),
            opt(&r.s),
            opt(&r.matmuls),
            status,
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn timings_csv(records: &[BenchRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["problem", "method", "seconds"]).map_err(csv_err)?;
    for r in records {
        w.write_record([r.problem.to_string(), r.method.name().to_string(), format!("{:e}", r.seconds)])
            .map_err(csv_err)?;
    }
    finish(w)
}

pub fn profile_csv(records: &[BenchRecord], methods: &[Method]) -> Result<Vec<u8>> {
    let alphas = alpha_grid();
    let prof = profile(&error_table(records, methods), &alphas);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["alpha".to_string()];
    head.extend(methods.iter().map(|m| m.name().to_string()));
    w.write_record(&head).map_err(csv_err)?;
    for (alpha, row) in alphas.iter().zip(&prof) {
        let mut rec = vec![format!("{alpha}")];
        rec.extend(row.iter().map(|p| format!("{p}")));
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish(w)
}
