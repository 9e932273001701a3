//! The ground field: arbitrary-precision rationals.

use num::{BigInt, BigRational};

/// An exact rational number. `BigRational` keeps fractions reduced with a
/// positive denominator, which is exactly the invariant we need.
pub type Scalar = BigRational;

/// Shorthand for small rational constants.
pub fn scalar(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
