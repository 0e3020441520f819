use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blockexp::expm::derive_table;
use blockexp::pade::DEGREES;
use blockexp_cli::bench::{self, BenchConfig};
use blockexp_cli::compute::{self, ComputeArgs, Method, SchurFlag};
use blockexp_cli::error::{CliError, Result};
use blockexp_cli::gen::{self, Kind};
use blockexp_cli::io::{self, Format};
use blockexp_cli::{acceptance, sweep};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "blockexp", version, about = "Exponentials of block triangular matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Array,
    Coordinate,
    Rows,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Array => Format::Array,
            OutFormat::Coordinate => Format::Coordinate,
            OutFormat::Rows => Format::PlainRows,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute e^A, e^B and L_exp(A, B, E) from matrix files.
    Compute {
        #[arg(long = "A", value_name = "FILE")]
        a: PathBuf,
        #[arg(long = "B", value_name = "FILE")]
        b: PathBuf,
        #[arg(long = "E", value_name = "FILE")]
        e: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Alg41)]
        method: Method,
        /// Output prefix for <out>_X.mtx, <out>_Y.mtx, <out>_D.mtx, <out>_diag.txt.
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "force-schur", value_enum, default_value_t = SchurFlag::Auto)]
        force_schur: SchurFlag,
        /// Decimal digits for the oracle method.
        #[arg(long, default_value_t = 100)]
        digits: usize,
    },
    /// Write a seeded test matrix.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        n: usize,
        #[arg(default_value_t = 0)]
        seed: u64,
        /// Output file; for hamiltonian-pair a prefix for <out>_T and <out>_H.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Array)]
        format: OutFormat,
    },
    /// Accuracy benchmark against the oracle with a performance profile.
    Bench {
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long = "nA", default_value_t = 10)]
        n_a: usize,
        #[arg(long = "nB", default_value_t = 8)]
        n_b: usize,
        #[arg(long, default_value_t = 2025)]
        seed: u64,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Method::Alg41, Method::Kl, Method::BlockEmbed])]
        methods: Vec<Method>,
        #[arg(long = "oracle-digits", default_value_t = 100)]
        oracle_digits: usize,
        /// Output prefix for <out>.csv, <out>_timings.csv, <out>_profile.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Relative errors of L_exp(T, -T^T, 2^t H) over t = -600..600.
    AlphaSweep {
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Use a random stable triangular T and symmetric H instead of the gallery pair.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        digits: usize,
        /// Also write the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute ell_m and theta_m in high precision.
    DeriveConstants {
        #[arg(long, default_value_t = 120)]
        digits: usize,
    },
    /// Run the acceptance suite, or only the listed criteria.
    Validate {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=10))]
        ids: Vec<u8>,
    },
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Compute {
            a,
            b,
            e,
            method,
            out,
            force_schur,
            digits,
        } => {
            let args = ComputeArgs {
                a: &a,
                b: &b,
                e: &e,
                method,
                out: &out,
                schur: force_schur,
                digits,
            };
            for p in compute::compute_files(&args)? {
                println!("{}", p.display());
            }
        }
        Cmd::Gen {
            kind,
            n,
            seed,
            out,
            format,
        } => {
            if kind == Kind::HamiltonianPair {
                let (t, h) = gen::generate_pair(n)?;
                for (suffix, m) in [("_T.mtx", &t), ("_H.mtx", &h)] {
                    io::write(&suffixed(&out, suffix), m, format.into())?;
                }
            } else {
                io::write(&out, &gen::generate(kind, n, seed)?, format.into())?;
            }
        }
        Cmd::Bench {
            count,
            n_a,
            n_b,
            seed,
            methods,
            oracle_digits,
            out,
        } => {
            let cfg = BenchConfig {
                count,
                n_a,
                n_b,
                seed,
                methods,
                oracle_digits,
            };
            let records = bench::run(&cfg)?;
            write_bytes(&suffixed(&out, ".csv"), &bench::records_csv(&records, &cfg)?)?;
            write_bytes(&suffixed(&out, "_timings.csv"), &bench::timings_csv(&records)?)?;
            let profile = bench::profile_csv(&records, &cfg.methods)?;
            write_bytes(&suffixed(&out, "_profile.csv"), &profile)?;
            print!("{}", String::from_utf8_lossy(&profile));
        }
        Cmd::AlphaSweep { n, seed, digits, out } => {
            if digits < 50 {
                return Err(CliError::Usage("--digits must be at least 50".into()));
            }
            let (t, h) = sweep::pair(n, seed)?;
            let rows = sweep::sweep(&t, &h, digits)?;
            print!("{}", sweep::table(&rows));
            if let Some(out) = out {
                let mut csv = String::from("t,alg41,kl,block-embed\n");
                for r in &rows {
                    csv.push_str(&format!("{},{:e},{:e},{:e}\n", r.t, r.errors[0], r.errors[1], r.errors[2]));
                }
                write_bytes(&out, csv.as_bytes())?;
            }
        }
        Cmd::DeriveConstants { digits } => {
            let t = derive_table(digits)?;
            println!("{:>3} {:>24} {:>24}", "m", "ell_m", "theta_m");
            for (i, m) in DEGREES.iter().enumerate() {
                println!("{m:>3} {:>24.16e} {:>24.16e}", t.ell[i], t.theta[i]);
            }
        }
        Cmd::Validate { ids } => {
            let ids: Vec<usize> = if ids.is_empty() {
                (1..=10).collect()
            } else {
                ids.into_iter().map(usize::from).collect()
            };
            let mut all = true;
            for id in ids {
                let t0 = std::time::Instant::now();
                let o = acceptance::run(id);
                println!("{o} ({:.1} s)", t0.elapsed().as_secs_f64());
                all &= o.passed;
            }
            return Ok(if all { 0 } else { 2 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
