//! Arbitrary-precision reference computations.
//!
//! Everything here is independent of the double-precision algorithms: the
//! exponential is a scaled Taylor series, `L_exp` is read off the exponential
//! of the block matrix, and eigenvalues come from the characteristic
//! polynomial. Results serve as referees in tests and benchmarks.

pub mod big;
mod expm;
mod matrix;
pub mod poly;
pub mod series;

pub use big::{digits_to_bits, BigComplex, BigFloat};
pub use expm::{complex_embed, expm_ref, expm_ref_f64, lexp_ref, lexp_ref_all, lexp_ref_complex, phi_ref, rel_err, working_bits};
pub use matrix::{block_upper, BigMatrix};
pub use poly::{charpoly, eigenvalues_ref, poly_roots};

/// Default oracle precision in decimal digits.
pub const DEFAULT_DIGITS: usize = 100;
