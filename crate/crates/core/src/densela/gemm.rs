use std::sync::atomic::{AtomicUsize, Ordering};

use super::Mat;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of full matrix-matrix products performed within one algorithm invocation.
#[derive(Debug, Default)]
pub struct MatmulCounter(AtomicUsize);

impl MatmulCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self) -> usize {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }

    fn bump(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }
}

/// Products with at least this many multiply-adds are split across threads
/// when the `parallel` feature is on.
#[cfg(feature = "parallel")]
const PARALLEL_FLOPS: usize = 48 * 48 * 48;

/// `a * b`, counted once in `counter`.
pub fn matmul<T: Scalar>(a: &Mat<T>, b: &Mat<T>, counter: &MatmulCounter) -> Result<Mat<T>> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    counter.bump();
    #[cfg(feature = "parallel")]
    {
        if a.rows() * a.cols() * b.cols() >= PARALLEL_FLOPS {
            return Ok(gemm_parallel(a, b));
        }
    }
    Ok(gemm_sequential(a, b))
}

fn product_column<T: Scalar>(a: &Mat<T>, bcol: &[T], out: &mut [T]) {
    for (k, &bkj) in bcol.iter().enumerate() {
        if bkj == T::zero() {
            continue;
        }
        for (o, &aik) in out.iter_mut().zip(a.col(k)) {
            *o += aik * bkj;
        }
    }
}

/// Single-threaded product; panics on a shape mismatch.
pub fn gemm_sequential<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    assert_eq!(a.cols(), b.rows(), "gemm inner dimensions");
    let mut c = Mat::zeros(a.rows(), b.cols());
    if a.rows() == 0 {
        return c;
    }
    for j in 0..b.cols() {
        product_column(a, b.col(j), c.col_mut(j));
    }
    c
}

/// Column-parallel product. Every output column is computed by the same
/// sequence of operations as in [`gemm_sequential`], so results are bitwise
/// identical. Without the `parallel` feature this is the sequential kernel.
pub fn gemm_parallel<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        assert_eq!(a.cols(), b.rows(), "gemm inner dimensions");
        let mut c = Mat::zeros(a.rows(), b.cols());
        let m = a.rows();
        if m == 0 {
            return c;
        }
        c.as_mut_slice()
            .par_chunks_mut(m)
            .enumerate()
            .for_each(|(j, out)| product_column(a, b.col(j), out));
        c
    }
    #[cfg(not(feature = "parallel"))]
    {
        gemm_sequential(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_product_counts_once() {
        let ctr = MatmulCounter::new();
        let m = Mat::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 10.0]]);
        let p = matmul(&Mat::identity(3), &m, &ctr).unwrap();
        assert_eq!(p, m);
        assert_eq!(ctr.get(), 1);
    }

    #[test]
    fn permutation_swaps_columns() {
        let ctr = MatmulCounter::new();
        let a = Mat::from_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        let p = Mat::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(matmul(&a, &p, &ctr).unwrap(), Mat::from_rows(&[[2.0, 1.0], [4.0, 3.0]]));
    }

    #[test]
    fn mismatch_names_both_shapes() {
        let ctr = MatmulCounter::new();
        let err = matmul(&Mat::<f64>::zeros(2, 3), &Mat::zeros(2, 3), &ctr).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                op: "matmul",
                left: (2, 3),
                right: (2, 3)
            }
        );
        assert_eq!(ctr.get(), 0);
        assert!(err.to_string().contains("(2, 3)"));
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let a = Mat::from_fn(70, 65, |i, j| ((i * 31 + j * 17) % 23) as f64 / 7.0 - 1.3);
        let b = Mat::from_fn(65, 60, |i, j| ((i * 13 + j * 29) % 19) as f64 / 3.0 - 2.1);
        assert_eq!(gemm_parallel(&a, &b), gemm_sequential(&a, &b));
    }

    #[test]
    fn empty_operands() {
        let c = gemm_sequential(&Mat::<f64>::zeros(3, 0), &Mat::zeros(0, 2));
        assert_eq!(c, Mat::zeros(3, 2));
        let c = gemm_sequential(&Mat::<f64>::zeros(0, 4), &Mat::zeros(4, 2));
        assert_eq!(c.shape(), (0, 2));
    }
}
