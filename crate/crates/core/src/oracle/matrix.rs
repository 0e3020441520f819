use super::big::{big, is_zero, ldexp, to_f64, zero, BigFloat};
use crate::densela::Mat;

/// Dense column-major matrix of [`BigFloat`] sharing one working precision.
#[derive(Clone, Debug, PartialEq)]
pub struct BigMatrix {
    rows: usize,
    cols: usize,
    bits: usize,
    data: Vec<BigFloat>,
}

impl BigMatrix {
    pub fn zeros(rows: usize, cols: usize, bits: usize) -> Self {
        Self {
            rows,
            cols,
            bits,
            data: vec![zero(bits); rows * cols],
        }
    }

    pub fn identity(n: usize, bits: usize) -> Self {
        let mut m = Self::zeros(n, n, bits);
        for i in 0..n {
            m.set(i, i, big(1.0, bits));
        }
        m
    }

    /// Exact conversion of a double matrix.
    pub fn from_f64(m: &Mat<f64>, bits: usize) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            bits,
            data: m.as_slice().iter().map(|&x| big(x, bits)).collect(),
        }
    }

    /// Round every entry to the nearest double.
    pub fn to_f64(&self) -> Mat<f64> {
        Mat::from_col_major(self.rows, self.cols, self.data.iter().map(to_f64).collect()).expect("consistent shape")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn get(&self, i: usize, j: usize) -> &BigFloat {
        &self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigFloat) {
        self.data[j * self.rows + i] = x;
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols, self.bits);
        for j in 0..cols {
            for i in 0..rows {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        for j in 0..src.cols {
            for i in 0..src.rows {
                self.set(r0 + i, c0 + j, src.get(i, j).clone());
            }
        }
    }

    /// Product skipping exact zeros, which keeps block-structured operands cheap.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "BigMatrix product shapes");
        let mut out = Self::zeros(self.rows, other.cols, self.bits.max(other.bits));
        for j in 0..other.cols {
            for k in 0..self.cols {
                let bkj = other.get(k, j);
                if is_zero(bkj) {
                    continue;
                }
                for i in 0..self.rows {
                    let aik = self.get(i, k);
                    if is_zero(aik) {
                        continue;
                    }
                    let idx = j * out.rows + i;
                    out.data[idx] = &out.data[idx] + aik * bkj;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "BigMatrix sum shapes");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        self.with_data(data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "BigMatrix difference shapes");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        self.with_data(data)
    }

    pub fn scale(&self, x: &BigFloat) -> Self {
        let data = self.data.iter().map(|a| a * x).collect();
        self.with_data(data)
    }

    /// `self * 2^k`, exact.
    pub fn ldexp(&self, k: isize) -> Self {
        let data = self.data.iter().map(|a| ldexp(a, k)).collect();
        self.with_data(data)
    }

    /// `self += c I`.
    pub fn add_diag(&mut self, c: &BigFloat) {
        for i in 0..self.rows.min(self.cols) {
            let v = self.get(i, i) + c;
            self.set(i, i, v);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.bits);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Infinity norm rounded to a double; adequate for scaling decisions.
    pub fn norm_inf_f64(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| to_f64(self.get(i, j)).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Infinity norm in full precision.
    pub fn norm_inf(&self) -> BigFloat {
        let mut best = zero(self.bits);
        for i in 0..self.rows {
            let mut s = zero(self.bits);
            for j in 0..self.cols {
                s += super::big::abs(self.get(i, j));
            }
            if s > best {
                best = s;
            }
        }
        best
    }

    fn with_data(&self, data: Vec<BigFloat>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            bits: self.bits,
            data,
        }
    }
}

/// `[[a, e], [0, b]]`.
pub fn block_upper(a: &BigMatrix, b: &BigMatrix, e: &BigMatrix) -> BigMatrix {
    let (n, d) = (a.rows(), b.rows());
    let mut m = BigMatrix::zeros(n + d, n + d, a.bits().max(b.bits()).max(e.bits()));
    m.set_block(0, 0, a);
    m.set_block(0, n, e);
    m.set_block(n, n, b);
    m
}
