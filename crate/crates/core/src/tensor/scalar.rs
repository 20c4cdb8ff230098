use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// Entry type of tensors and polynomials: `f64` for numerics, `BigRational`
/// when exact arithmetic is needed.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    fn from_count(c: u128) -> Self;
    fn to_f64(&self) -> f64;
    /// Text form that parses back to the same value.
    fn render(&self) -> String;
}

impl Scalar for f64 {
    fn from_count(c: u128) -> Self {
        c as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

impl Scalar for BigRational {
    fn from_count(c: u128) -> Self {
        BigRational::from_integer(BigInt::from(c))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn render(&self) -> String {
        if self.denom() == &BigInt::from(1) {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Exact rational from an `f64` (the binary value, not the decimal one).
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
