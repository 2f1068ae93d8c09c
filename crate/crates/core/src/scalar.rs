//! The exact ordered field every computation in this crate runs over.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed};

/// An exact, totally ordered field.
///
/// Floating-point types are deliberately excluded by the `Ord` bound: every
/// predicate here is an equality or containment of convex sets, and those are
/// only decidable with exact arithmetic. `BigRational` is the workhorse;
/// `Rational64` works for small inputs where overflow cannot occur.
pub trait Field:
    Clone + Debug + Display + Ord + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer is representable in the field")
    }

    fn ratio(p: i64, q: i64) -> Self {
        Self::from_int(p) / Self::from_int(q)
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }
}

impl<T> Field for T where
    T: Clone + Debug + Display + Ord + Num + Signed + FromPrimitive + Send + Sync + 'static
{
}

/// `base^-k` for a non-negative exponent.
pub fn inverse_power<F: Field>(base: i64, k: u32) -> F {
    let mut out = F::one();
    let b = F::from_int(base);
    for _ in 0..k {
        out = out / b.clone();
    }
    out
}
