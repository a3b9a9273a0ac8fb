use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Coefficient field for the polynomial substrate.
///
/// Exact zero-testing only makes sense for exact types; the engine itself is
/// instantiated with [`crate::Rat`], and `num_rational::Rational64` works for
/// small experiments.
pub trait Scalar:
    Num + Clone + Debug + Display + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("scalar type cannot represent integer")
    }
}

impl<T> Scalar for T where
    T: Num + Clone + Debug + Display + Neg<Output = T> + FromPrimitive + Send + Sync + 'static
{
}

/// A polynomial indeterminate.
pub trait Variable: Copy + Ord + Hash + Debug + Send + Sync + 'static {
    /// Weight used to grade monomials for canonical printing.
    fn grade(&self) -> i64;
    fn text_name(&self) -> String;
    fn latex_name(&self) -> String;
}
