//! Field abstraction shared by the hull code and the membership tests.
//!
//! Rationals compare exactly; floats treat anything below a fixed absolute
//! threshold as zero. Everything that must be bit-stable runs on
//! [`Rational`](crate::Rational).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + PartialOrd + Signed + FromPrimitive + Send + Sync + 'static {
    /// Whether the value counts as zero for sign decisions.
    fn is_negligible(&self) -> bool;

    fn from_rational(r: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    /// Rescales a direction vector in place without changing its ray.
    fn normalize_direction(v: &mut [Self]);

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 is representable")
    }

    fn sign(&self) -> i8 {
        if self.is_negligible() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Scalar for BigRational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn normalize_direction(v: &mut [Self]) {
        let ints = primitive_integer_vector(v);
        for (slot, k) in v.iter_mut().zip(ints) {
            *slot = BigRational::from_integer(k);
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            fn is_negligible(&self) -> bool {
                self.abs() < $eps
            }

            fn from_rational(r: &BigRational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn normalize_direction(v: &mut [Self]) {
                let scale = v.iter().fold(0.0 as $t, |m, x| m.max(x.abs()));
                if scale > 0.0 {
                    v.iter_mut().for_each(|x| *x /= scale);
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

/// Clears denominators and divides by the gcd, keeping the direction.
/// The zero vector maps to zeros.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|x| x / &gcd).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn primitive_vector_clears_denominators() {
        let v = vec![q(1, 2), q(-3, 4), q(0, 1)];
        let ints = primitive_integer_vector(&v);
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }

    #[test]
    fn float_negligible_threshold() {
        assert!(1e-10_f64.is_negligible());
        assert!(!1e-8_f64.is_negligible());
        assert_eq!((-0.5_f64).sign(), -1);
        assert_eq!(q(0, 3).sign(), 0);
    }
}
