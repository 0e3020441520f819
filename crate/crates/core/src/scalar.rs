//! Scalar abstraction over `f64` and `Complex64`.
//!
//! Every kernel in the crate is generic over [`Scalar`], so real inputs are
//! processed entirely in real arithmetic and complex storage is only used
//! when the caller supplies complex matrices.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex64;
use num_traits::NumAssign;

use crate::densela::{Mat, SchurForm};
use crate::error::Result;

/// Real or complex double-precision scalar.
pub trait Scalar: NumAssign + Neg<Output = Self> + Copy + Send + Sync + Debug + PartialEq + 'static {
    /// `true` for complex scalars.
    const IS_COMPLEX: bool;

    fn from_real(x: f64) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    /// Modulus `|z|`.
    fn modulus(self) -> f64;
    /// `|re| + |im|`, a cheap modulus substitute for pivoting and deflation tests.
    fn abs1(self) -> f64 {
        self.re().abs() + self.im().abs()
    }
    fn conj(self) -> Self;
    fn exp(self) -> Self;
    fn sinh(self) -> Self;
    fn is_finite(self) -> bool;
    /// Multiply by a real factor componentwise.
    fn mul_real(self, x: f64) -> Self;

    /// Schur decomposition in the natural arithmetic of the scalar type:
    /// real quasi-triangular for `f64`, triangular for `Complex64`.
    fn schur(m: &Mat<Self>) -> Result<SchurForm<Self>>;

    /// Exact exponential of a 2x2 diagonal bump `[a b; c d]`, stored column-major.
    /// Only real quasi-triangular matrices carry such bumps.
    fn exp_bump(block: [Self; 4]) -> Option<[Self; 4]>;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn abs1(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn mul_real(self, x: f64) -> Self {
        self * x
    }

    fn schur(m: &Mat<Self>) -> Result<SchurForm<Self>> {
        crate::densela::schur_real(m)
    }

    fn exp_bump(block: [Self; 4]) -> Option<[Self; 4]> {
        let [a, c, b, d] = block;
        let e = crate::densela::exp2x2([[a, b], [c, d]]);
        Some([e[0][0], e[1][0], e[0][1], e[1][1]])
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn im(self) -> f64 {
        self.im
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        Complex64::sinh(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    #[inline]
    fn mul_real(self, x: f64) -> Self {
        Complex64::new(self.re * x, self.im * x)
    }

    fn schur(m: &Mat<Self>) -> Result<SchurForm<Self>> {
        crate::densela::schur_complex(m)
    }

    fn exp_bump(_block: [Self; 4]) -> Option<[Self; 4]> {
        None
    }
}

/// `2^k` as an exact `f64`, valid for `-1022 <= k <= 1023`.
pub fn pow2(k: i32) -> f64 {
    assert!((-1022..=1023).contains(&k), "2^{k} is not a normal double");
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// Unit roundoff of IEEE double precision, `2^-53`.
pub const UNIT_ROUNDOFF: f64 = 1.1102230246251565e-16;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_is_exact() {
        assert_eq!(pow2(0), 1.0);
        assert_eq!(pow2(-3), 0.125);
        assert_eq!(pow2(10), 1024.0);
        assert_eq!(pow2(-1022), f64::MIN_POSITIVE);
        assert_eq!(UNIT_ROUNDOFF, pow2(-53));
    }

    #[test]
    fn complex_mul_real_is_componentwise() {
        let z = Complex64::new(3.0, -0.5);
        assert_eq!(z.mul_real(0.25), Complex64::new(0.75, -0.125));
    }
}
