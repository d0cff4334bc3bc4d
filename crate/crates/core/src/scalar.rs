use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer ring element the linear-algebra layer is generic over.
///
/// Implemented for the primitive signed integers and for
/// [`num_bigint::BigInt`]. Machine integers are only safe when the caller
/// knows the entries stay small; everything outside `lattice` and `squares`
/// uses [`crate::Int`].
pub trait Scalar:
    Integer + Signed + Roots + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive
{
    fn from_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("scalar type cannot hold value")
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Roots + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive
{
}

/// Lossless conversion of any scalar into [`crate::Int`].
pub fn to_int<T: Scalar>(v: &T) -> crate::Int {
    v.to_string().parse().expect("integers render as decimal")
}
