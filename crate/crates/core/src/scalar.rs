//! The integer scalar abstraction.
//!
//! All lattice arithmetic is exact and works for any signed integer type:
//! `i64`/`i128` for small searches, `BigInt` when determinants and
//! normal-form intermediates may grow without bound.

use std::fmt;
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Signed integer scalar usable as the coefficient ring of a lattice.
pub trait Scalar:
    Integer
    + Roots
    + Signed
    + Clone
    + Hash
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Roots
        + Signed
        + Clone
        + Hash
        + FromPrimitive
        + ToPrimitive
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Converts a small constant into the scalar type.
pub fn scalar<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("scalar type too narrow for constant")
}

/// True iff `n` is even.
pub fn is_even<T: Scalar>(n: &T) -> bool {
    n.is_multiple_of(&scalar(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn scalar_conversion_roundtrips() {
        assert_eq!(scalar::<i64>(-17), -17);
        assert_eq!(scalar::<BigInt>(1 << 60), BigInt::from(1i64 << 60));
    }

    #[test]
    fn evenness() {
        assert!(is_even(&0i64));
        assert!(is_even(&-8i64));
        assert!(!is_even(&BigInt::from(-17)));
    }
}
