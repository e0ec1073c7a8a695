//! Coefficient domains: exact complex rationals and double-precision complex floats.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Complex, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type ExactComplex = Complex<BigRational>;
pub type C64 = Complex<f64>;

/// Commutative ring operations shared by scalars, form scalars and matrix entries.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Send
        + Sync
        + 'static
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

pub trait Scalar: Ring {
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn imag_unit() -> Self;

    fn conj(&self) -> Self;

    fn to_c64(&self) -> C64;

    /// Multiplicative inverse, `None` for zero.
    fn recip(&self) -> Option<Self>;

    /// Converts a float pair; exact scalars take the binary value verbatim.
    fn from_c64(z: C64) -> Option<Self>;

    fn from_rational(v: &BigRational) -> Self;

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for ExactComplex {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> C64 {
        Complex::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn recip(&self) -> Option<Self> {
        let norm = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        if norm.is_zero() {
            return None;
        }
        Some(Complex::new(
            self.re.clone() / norm.clone(),
            -self.im.clone() / norm,
        ))
    }

    fn from_c64(z: C64) -> Option<Self> {
        Some(Complex::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        ))
    }

    fn from_rational(v: &BigRational) -> Self {
        Complex::new(v.clone(), BigRational::zero())
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }

    fn imag_unit() -> Self {
        Complex::new(0.0, 1.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.inv())
        }
    }

    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }

    fn from_rational(v: &BigRational) -> Self {
        Complex::new(rational_to_f64(v), 0.0)
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Very large numerators and denominators: shift both down before dividing.
    let bits = q.numer().bits().max(q.denom().bits()) as i64 - 900;
    let shift = bits.max(0) as usize;
    let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

/// Shorthand for an exact real rational.
pub fn q(num: i64, den: i64) -> ExactComplex {
    ExactComplex::from_ratio(num, den)
}

/// Shorthand for an exact complex rational `a + b i`.
pub fn qc(re: (i64, i64), im: (i64, i64)) -> ExactComplex {
    Complex::new(
        BigRational::new(re.0.into(), re.1.into()),
        BigRational::new(im.0.into(), im.1.into()),
    )
}

/// `coeff · π^pi_power`, keeping transcendental factors symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct PiScaled<S> {
    pub coeff: S,
    pub pi_power: i32,
}

impl<S: Scalar> PiScaled<S> {
    pub fn to_c64(&self) -> C64 {
        self.coeff.to_c64() * std::f64::consts::PI.powi(self.pi_power)
    }
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_recip_roundtrip() {
        let z = qc((3, 2), (-1, 5));
        let w = z.recip().unwrap();
        assert_eq!(z * w, ExactComplex::one());
        assert!(ExactComplex::zero().recip().is_none());
    }

    #[test]
    fn rational_to_f64_handles_huge_values() {
        let big = BigRational::new(BigInt::from(10).pow(400u32), BigInt::from(3) * BigInt::from(10).pow(399u32));
        assert!((rational_to_f64(&big) - 10.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn pi_scaled_value() {
        let v = PiScaled { coeff: q(1, 2), pi_power: -1 };
        assert!((v.to_c64().re - 0.5 / std::f64::consts::PI).abs() < 1e-16);
    }
}
