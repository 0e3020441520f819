//! Command-line front end for `blockexp`: file IO, test generators, the
//! benchmark and alpha-sweep harnesses, and the acceptance suite.

pub mod acceptance;
pub mod bench;
pub mod compute;
pub mod error;
pub mod gen;
pub mod io;
pub mod sweep;

pub use error::{CliError, Result};
