use super::{ensure_square, Mat};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which side the coefficient matrix multiplies the unknown from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `M * S = RHS`
    Left,
    /// `S * M = RHS`
    Right,
}

/// `P M = L U` with unit lower `L` and upper `U` packed in one matrix.
#[derive(Clone, Debug)]
pub struct LuFactors<T> {
    lu: Mat<T>,
    /// Row `i` of `P M` is row `perm[i]` of `M`.
    perm: Vec<usize>,
}

impl<T: Scalar> LuFactors<T> {
    /// Factor with partial pivoting. An exactly zero pivot is reported as a
    /// singular Padé denominator.
    pub fn new(m: &Mat<T>) -> Result<Self> {
        ensure_square("lu", m)?;
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs1()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                return Err(Error::SingularPade { column: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(p, j)];
                    lu[(p, j)] = lu[(k, j)];
                    lu[(k, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                lu[(i, k)] /= pivot;
            }
            for j in k + 1..n {
                let ukj = lu[(k, j)];
                if ukj == T::zero() {
                    continue;
                }
                for i in k + 1..n {
                    let lik = lu[(i, k)];
                    lu[(i, j)] -= lik * ukj;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn factors(&self) -> (&Mat<T>, &[usize]) {
        (&self.lu, &self.perm)
    }

    /// Solve `M S = rhs`.
    pub fn solve_left(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        let n = self.dim();
        if rhs.rows() != n {
            return Err(Error::DimensionMismatch {
                op: "lu_solve(left)",
                left: self.lu.shape(),
                right: rhs.shape(),
            });
        }
        let mut s = Mat::zeros(n, rhs.cols());
        for j in 0..rhs.cols() {
            let b = rhs.col(j);
            let x = s.col_mut(j);
            for (xi, &pi) in x.iter_mut().zip(&self.perm) {
                *xi = b[pi];
            }
            // Unit lower forward substitution.
            for k in 0..n {
                let xk = x[k];
                if xk != T::zero() {
                    for (xi, &l) in x[k + 1..].iter_mut().zip(&self.lu.col(k)[k + 1..]) {
                        *xi -= l * xk;
                    }
                }
            }
            // Upper back substitution.
            for k in (0..n).rev() {
                x[k] /= self.lu[(k, k)];
                let xk = x[k];
                if xk != T::zero() {
                    for (xi, &u) in x[..k].iter_mut().zip(&self.lu.col(k)[..k]) {
                        *xi -= u * xk;
                    }
                }
            }
        }
        Ok(s)
    }

    /// Solve `S M = rhs` reusing the factorization of `M`.
    pub fn solve_right(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        let n = self.dim();
        if rhs.cols() != n {
            return Err(Error::DimensionMismatch {
                op: "lu_solve(right)",
                left: rhs.shape(),
                right: self.lu.shape(),
            });
        }
        let r = rhs.rows();
        // M = P^T L U, so S P^T L U = rhs. Solve W U = rhs, then Z L = W, then S = Z P.
        let mut w = rhs.clone();
        for j in 0..n {
            for k in 0..j {
                let ukj = self.lu[(k, j)];
                if ukj == T::zero() {
                    continue;
                }
                for i in 0..r {
                    let wik = w[(i, k)];
                    w[(i, j)] -= wik * ukj;
                }
            }
            let ujj = self.lu[(j, j)];
            for x in w.col_mut(j) {
                *x /= ujj;
            }
        }
        for j in (0..n).rev() {
            for k in j + 1..n {
                let lkj = self.lu[(k, j)];
                if lkj == T::zero() {
                    continue;
                }
                for i in 0..r {
                    let wik = w[(i, k)];
                    w[(i, j)] -= wik * lkj;
                }
            }
        }
        let mut s = Mat::zeros(r, n);
        for (i, &pi) in self.perm.iter().enumerate() {
            s.col_mut(pi).copy_from_slice(w.col(i));
        }
        Ok(s)
    }
}

/// Solve `M S = rhs` (left) or `S M = rhs` (right) with partial pivoting.
pub fn lu_solve<T: Scalar>(m: &Mat<T>, rhs: &Mat<T>, side: Side) -> Result<Mat<T>> {
    let lu = LuFactors::new(m)?;
    match side {
        Side::Left => lu.solve_left(rhs),
        Side::Right => lu.solve_right(rhs),
    }
}
