//! Data parallelism across independent problems.
//!
//! With the `parallel` feature the helpers run on the rayon pool; without it
//! they fall back to plain loops. Output order always follows input order.

use crate::densela::Mat;
use crate::error::Result;
use crate::expm::{expm_block_tri, ExpmOptions, ExpmResult};
use crate::scalar::Scalar;

/// Run two closures, concurrently when possible.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}

/// `items.iter().map(f)`, in parallel when the feature is on.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

pub fn map_sequential<T, R, F: Fn(&T) -> R>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}

/// A block triple `(A, B, E)`.
pub type Triple<T> = (Mat<T>, Mat<T>, Mat<T>);

/// [`expm_block_tri`] over a batch of triples.
pub fn expm_block_tri_batch<T: Scalar>(problems: &[Triple<T>], opts: &ExpmOptions) -> Vec<Result<ExpmResult<T>>> {
    map(problems, |(a, b, e)| expm_block_tri(a, b, e, opts))
}

pub fn expm_block_tri_batch_sequential<T: Scalar>(problems: &[Triple<T>], opts: &ExpmOptions) -> Vec<Result<ExpmResult<T>>> {
    map_sequential(problems, |(a, b, e)| expm_block_tri(a, b, e, opts))
}
