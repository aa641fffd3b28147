//! The exact scalar field everything in this crate computes over.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, Signed};

/// An exact, totally ordered field.
///
/// Floating-point types do not qualify (they are neither `Ord` nor `Hash`);
/// the intended implementors are `num_rational::Ratio<BigInt>` and, for
/// bounded workloads, `num_rational::Ratio<i64>`.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Num
    + Signed
    + FromPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Lifts a machine integer into the field.
    fn int(value: i64) -> Self {
        Self::from_i64(value).expect("every exact field contains the integers")
    }

    /// `self^exp` with the convention `0^0 = 1`.
    fn powi(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }

    /// `max(self, 0)`.
    fn positive_part(&self) -> Self {
        if self.is_negative() {
            Self::zero()
        } else {
            self.clone()
        }
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Hash
        + Num
        + Signed
        + FromPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(BigRational::int(0).powi(0), BigRational::int(1));
        assert_eq!(Rational64::int(-2).powi(3), Rational64::int(-8));
    }

    #[test]
    fn positive_part_clamps_negatives() {
        assert_eq!(Rational64::int(-5).positive_part(), Rational64::int(0));
        assert_eq!(Rational64::new(7, 3).positive_part(), Rational64::new(7, 3));
    }

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(
            "-3/6".parse::<BigRational>().unwrap(),
            BigRational::new((-1).into(), 2.into())
        );
        assert_eq!("4".parse::<BigRational>().unwrap(), BigRational::int(4));
    }
}
