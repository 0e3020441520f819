//! Dense matrix kernels.
//!
//! Storage is column-major. The module provides the instrumented matrix
//! product, LU with partial pivoting, real and complex Schur decompositions,
//! a Bartels–Stewart Sylvester solver and the closed-form 2x2 exponential.

mod exp2x2;
mod gemm;
mod lu;
mod schur;
mod sylvester;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use exp2x2::exp2x2;
pub use gemm::{gemm_parallel, gemm_sequential, matmul, MatmulCounter};
pub use lu::{lu_solve, LuFactors, Side};
pub use schur::{hessenberg, schur_complex, schur_real, SchurForm};
pub use sylvester::{sylvester_residual, sylvester_solve, sylvester_solve_real, sylvester_triangular};

/// Dense column-major matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Kind of a diagonal block in a (quasi-)triangular matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagBlock {
    One(usize),
    Two(usize),
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from a slice of rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == nc), "ragged rows");
        Self::from_fn(nr, nc, |i, j| rows[i].as_ref()[j])
    }

    pub fn scalar(x: T) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![x],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Multiply every entry by a real factor.
    pub fn scale(&self, factor: f64) -> Self {
        self.map(|x| x.mul_real(factor))
    }

    pub fn scale_mut(&mut self, factor: f64) {
        for x in &mut self.data {
            *x = x.mul_real(factor);
        }
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "axpy shape mismatch");
        for (x, &y) in self.data.iter_mut().zip(&other.data) {
            *x += y.mul_real(alpha);
        }
    }

    /// `self += alpha * I`.
    pub fn add_diag(&mut self, alpha: T) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += alpha;
        }
    }

    /// Linear combination `sum_k coeff_k * mats_k` accumulated left to right.
    pub fn lincomb(terms: &[(f64, &Self)]) -> Self {
        let (c0, m0) = terms.first().expect("lincomb needs at least one term");
        let mut out = m0.scale(*c0);
        for (c, m) in &terms[1..] {
            out.axpy(*c, m);
        }
        out
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.rows];
        for j in 0..self.cols {
            for (s, x) in sums.iter_mut().zip(self.col(j)) {
                *s += x.modulus();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// One norm (maximum absolute column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| self.col(j).iter().map(|x| x.modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        // Scaled accumulation so that huge entries do not overflow the sum of squares.
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let ssq: f64 = self
            .data
            .iter()
            .map(|x| {
                let t = x.modulus() / scale;
                t * t
            })
            .sum();
        scale * ssq.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self[(i, i)];
        }
        t
    }

    /// Copy of the block starting at `(r0, c0)` with the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        assert!(r0 + src.rows <= self.rows && c0 + src.cols <= self.cols, "block out of range");
        for j in 0..src.cols {
            for i in 0..src.rows {
                self[(r0 + i, c0 + j)] = src[(i, j)];
            }
        }
    }

    /// Assemble `[[a, e], [0, b]]`.
    pub fn block_upper(a: &Self, b: &Self, e: &Self) -> Self {
        let (n, d) = (a.rows, b.rows);
        assert_eq!(e.shape(), (n, d), "off-diagonal block shape");
        let mut m = Self::zeros(n + d, n + d);
        m.set_block(0, 0, a);
        m.set_block(0, n, e);
        m.set_block(n, n, b);
        m
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.cols).all(|j| self.col(j)[(j + 1).min(self.rows)..].iter().all(|x| *x == T::zero()))
    }

    /// Diagonal block structure of an upper quasi-triangular matrix, or `None`
    /// if the matrix has nonzeros below the first subdiagonal, two consecutive
    /// nonzero subdiagonal entries, or (for complex scalars) any nonzero
    /// subdiagonal entry.
    pub fn quasi_triangular_blocks(&self) -> Option<Vec<DiagBlock>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        for j in 0..n {
            if self.col(j)[(j + 2).min(n)..].iter().any(|x| *x != T::zero()) {
                return None;
            }
        }
        let mut blocks = Vec::new();
        let mut i = 0;
        while i < n {
            if i + 1 < n && self[(i + 1, i)] != T::zero() {
                if T::IS_COMPLEX || (i + 2 < n && self[(i + 2, i + 1)] != T::zero()) {
                    return None;
                }
                blocks.push(DiagBlock::Two(i));
                i += 2;
            } else {
                blocks.push(DiagBlock::One(i));
                i += 1;
            }
        }
        Some(blocks)
    }

    pub fn is_quasi_triangular(&self) -> bool {
        self.quasi_triangular_blocks().is_some()
    }
}

impl Mat<f64> {
    pub fn to_complex(&self) -> Mat<Complex64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }
}

impl Mat<Complex64> {
    pub fn real_part(&self) -> Mat<f64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.re).collect(),
        }
    }

    /// Largest imaginary part in modulus; zero iff the matrix is real.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;

    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;

    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                write!(f, " {:?}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Check that `m` is square, naming the operation on failure.
pub(crate) fn ensure_square<T: Scalar>(op: &'static str, m: &Mat<T>) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            op,
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}
