//! One triple through one method, plus the files `compute` writes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use blockexp::expm::{block_embed, expm_block_tri, ExpmOptions, SchurPolicy};
use blockexp::kl::{kl_frechet, KlOptions};
use blockexp::oracle::lexp_ref_all;
use blockexp::Mat;
use clap::ValueEnum;

use crate::error::{CliError, Result};
use crate::io::{self, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Method {
    Alg41,
    Kl,
    #[value(name = "block", alias = "block-embed")]
    BlockEmbed,
    /// High-precision block embedding, rounded to double.
    Oracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Alg41 => "alg41",
            Self::Kl => "kl",
            Self::BlockEmbed => "block-embed",
            Self::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum SchurFlag {
    #[default]
    Auto,
    Always,
    Never,
}

impl From<SchurFlag> for SchurPolicy {
    fn from(f: SchurFlag) -> Self {
        match f {
            SchurFlag::Auto => SchurPolicy::Auto,
            SchurFlag::Always => SchurPolicy::Always,
            SchurFlag::Never => SchurPolicy::Never,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Computed {
    pub x: Mat<f64>,
    pub y: Mat<f64>,
    pub d: Mat<f64>,
    /// Ordered `key=value` diagnostics.
    pub diag: Vec<(&'static str, String)>,
}

pub fn run(method: Method, a: &Mat<f64>, b: &Mat<f64>, e: &Mat<f64>, schur: SchurFlag, digits: usize) -> Result<Computed> {
    run_with(method, a, b, e, schur, digits, true)
}

/// As [`run`]; with `blocks = false` the Kenney–Laub path skips `e^A` and
/// `e^B`, which it does not produce on its own, and leaves `x`, `y` empty.
pub fn run_with(
    method: Method,
    a: &Mat<f64>,
    b: &Mat<f64>,
    e: &Mat<f64>,
    schur: SchurFlag,
    digits: usize,
    blocks: bool,
) -> Result<Computed> {
    let mut diag = vec![("method", method.name().to_string())];
    let (x, y, d) = match method {
        Method::Alg41 => {
            let opts = ExpmOptions {
                schur: schur.into(),
                ..Default::default()
            };
            let r = expm_block_tri(a, b, e, &opts)?;
            diag.extend([
                ("m", r.m.to_string()),
                ("s", r.s.to_string()),
                ("used_schur", r.used_schur.to_string()),
                ("matmuls", r.matmuls.to_string()),
                ("overflow", r.overflow.to_string()),
            ]);
            (r.x, r.y, r.d)
        }
        Method::Kl => {
            let r = kl_frechet(a, b, e, &KlOptions::default())?;
            diag.extend([("s", r.s.to_string()), ("imag_dropped", format!("{:e}", r.imag_dropped))]);
            if blocks {
                let ex = expm_block_tri(a, b, &Mat::zeros(a.rows(), b.rows()), &ExpmOptions::default())?;
                (ex.x, ex.y, r.d)
            } else {
                (Mat::zeros(0, 0), Mat::zeros(0, 0), r.d)
            }
        }
        Method::BlockEmbed => {
            let r = block_embed(a, b, e)?;
            diag.extend([("m", r.m.to_string()), ("s", r.s.to_string()), ("overflow", r.overflow.to_string())]);
            (r.x, r.y, r.d)
        }
        Method::Oracle => {
            if digits < 50 {
                return Err(CliError::Usage(format!("oracle needs at least 50 digits, got {digits}")));
            }
            let (x, y, d) = lexp_ref_all(a, b, e, digits);
            diag.push(("digits", digits.to_string()));
            (x.to_f64(), y.to_f64(), d.to_f64())
        }
    };
    Ok(Computed { x, y, d, diag })
}

pub struct ComputeArgs<'a> {
    pub a: &'a Path,
    pub b: &'a Path,
    pub e: &'a Path,
    pub method: Method,
    pub out: &'a Path,
    pub schur: SchurFlag,
    pub digits: usize,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Reads the three inputs, runs the method, writes `<out>_X.mtx`, `<out>_Y.mtx`,
/// `<out>_D.mtx` and `<out>_diag.txt`. Returns the written paths.
pub fn compute_files(args: &ComputeArgs) -> Result<Vec<PathBuf>> {
    let (a, b, e) = (io::read(args.a)?, io::read(args.b)?, io::read(args.e)?);
    let t0 = Instant::now();
    let res = run(args.method, &a, &b, &e, args.schur, args.digits)?;
    let secs = t0.elapsed().as_secs_f64();

    let mut written = Vec::new();
    for (name, m) in [("_X.mtx", &res.x), ("_Y.mtx", &res.y), ("_D.mtx", &res.d)] {
        let p = with_suffix(args.out, name);
        io::write(&p, m, Format::Array)?;
        written.push(p);
    }
    let mut side = String::new();
    for (k, v) in &res.diag {
        let _ = writeln!(side, "{k}={v}");
    }
    let _ = writeln!(side, "n={}", a.rows());
    let _ = writeln!(side, "d={}", b.rows());
    let _ = writeln!(side, "time_s={secs:e}");
    let p = with_suffix(args.out, "_diag.txt");
    std::fs::write(&p, side).map_err(|e| CliError::io(&p, e))?;
    written.push(p);
    Ok(written)
}
