//! Arbitrary-precision scalars on top of `dashu-float`.

use std::ops::{Add, Mul, Neg, Sub};

use dashu_base::{Abs, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

/// Binary floating point with round-half-even and a per-value precision in bits.
pub type BigFloat = FBig<HalfEven, 2>;

/// Bits needed to carry `digits` decimal digits.
pub fn digits_to_bits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 4
}

pub fn big(x: f64, bits: usize) -> BigFloat {
    BigFloat::try_from(x).expect("finite f64").with_precision(bits).value()
}

pub fn big_int(i: i64, bits: usize) -> BigFloat {
    BigFloat::from(i).with_precision(bits).value()
}

pub fn zero(bits: usize) -> BigFloat {
    BigFloat::ZERO.with_precision(bits).value()
}

pub fn one(bits: usize) -> BigFloat {
    BigFloat::ONE.with_precision(bits).value()
}

/// Nearest double.
pub fn to_f64(x: &BigFloat) -> f64 {
    x.to_f64().value()
}

pub fn is_zero(x: &BigFloat) -> bool {
    x.repr().is_zero()
}

pub fn abs(x: &BigFloat) -> BigFloat {
    x.clone().abs()
}

pub fn sqrt(x: &BigFloat) -> BigFloat {
    x.sqrt()
}

/// `x * 2^k`, exact.
pub fn ldexp(x: &BigFloat, k: isize) -> BigFloat {
    x.clone() << k
}

/// Exact conversion of an arbitrary-size integer (rounded to `bits` if longer).
pub fn from_bigint(x: &num_bigint::BigInt, bits: usize) -> BigFloat {
    let (sign, digits) = x.to_u32_digits();
    let mut acc = zero(bits.max(32 * digits.len() + 8));
    for &d in digits.iter().rev() {
        acc = ldexp(&acc, 32) + big(d as f64, bits);
    }
    let acc = acc.with_precision(bits).value();
    if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    }
}

pub fn from_rational(r: &num_rational::BigRational, bits: usize) -> BigFloat {
    from_bigint(r.numer(), bits) / from_bigint(r.denom(), bits)
}

/// Complex number with [`BigFloat`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        let bits = re.precision();
        Self { re, im: zero(bits) }
    }

    pub fn from_f64(re: f64, im: f64, bits: usize) -> Self {
        Self::new(big(re, bits), big(im, bits))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> BigFloat {
        sqrt(&self.norm_sqr())
    }

    pub fn div(&self, other: &Self) -> Self {
        let den = other.norm_sqr();
        let num = self * &other.conj();
        Self::new(num.re / &den, num.im / &den)
    }

    pub fn scale(&self, x: &BigFloat) -> Self {
        Self::new(&self.re * x, &self.im * x)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let bits = self.re.precision().max(self.im.precision());
        let r = self.abs();
        if is_zero(&r) {
            return Self::real(zero(bits));
        }
        let half = big(0.5, bits);
        let a = sqrt(&((&r + &abs(&self.re)) * &half));
        // a = sqrt((|z| + |re|)/2) > 0; the other part is im / (2a).
        let b = &self.im / (&a * big(2.0, bits));
        if self.re >= zero(bits) {
            Self::new(a, b)
        } else if self.im >= zero(bits) {
            Self::new(abs(&b), a)
        } else {
            Self::new(abs(&b), -a)
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re.clone(), -self.im.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_exact_shift() {
        let x = big(0.1, 200);
        assert_eq!(to_f64(&x), 0.1);
        assert_eq!(to_f64(&ldexp(&x, 3)), 0.8);
    }

    #[test]
    fn complex_sqrt_branches() {
        for (re, im) in [(3.0, 4.0), (-3.0, 4.0), (-3.0, -4.0), (0.0, 2.0), (-4.0, 0.0)] {
            let z = BigComplex::from_f64(re, im, 200);
            let r = z.sqrt();
            let back = &r * &r;
            let (a, b) = back.to_f64_pair();
            assert!((a - re).abs() < 1e-15 && (b - im).abs() < 1e-15, "{re} {im}");
            assert!(to_f64(&r.re) >= 0.0);
        }
    }
}
