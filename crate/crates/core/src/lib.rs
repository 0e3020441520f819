//! Simultaneous computation of `e^A`, `e^B` and the off-diagonal block
//! `L_exp(A, B, E)` of the exponential of `[[A, E], [0, B]]`.

pub mod apps;
pub mod batch;
pub mod densela;
pub mod error;
pub mod expm;
pub mod kl;
pub mod oracle;
pub mod pade;
pub mod scalar;

pub use densela::{Mat, MatmulCounter};
pub use error::{Error, Result};
pub use expm::{expm_block_tri, ExpmOptions, ExpmResult, SchurPolicy};
pub use kl::{kl_frechet, kl_frechet_complex, KlOptions, KlResult};
pub use scalar::Scalar;
