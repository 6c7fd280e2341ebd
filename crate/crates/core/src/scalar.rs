//! Numeric scalars for normalized distances.
//!
//! Distances between finite words are exact integers (or half-integers);
//! normalizing by a prefix length produces a ratio. Callers choose how that
//! ratio is represented: `f64`/`f32` for speed or [`BigRational`] when the
//! value has to be compared exactly (periodic densities, Lipschitz constants).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive};

pub trait Scalar: Num + Clone + PartialOrd + Debug {
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: u64, den: u64) -> Self;

    /// `2^-exp`.
    fn pow2_neg(exp: usize) -> Self;

    fn to_f64(&self) -> f64;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn pow2_neg(exp: usize) -> Self {
        0.5f64.powi(exp.min(i32::MAX as usize) as i32)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: u64, den: u64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn pow2_neg(exp: usize) -> Self {
        0.5f32.powi(exp.min(i32::MAX as usize) as i32)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn pow2_neg(exp: usize) -> Self {
        BigRational::new(BigInt::one(), BigInt::one() << exp)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
