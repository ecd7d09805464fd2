//! Exact integer scalars for Cartan matrices and determinants.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

/// An exact, signed integer type: machine integers or arbitrary precision.
///
/// No floating-point type implements this; determinants are computed by
/// exact fraction-free elimination only.
pub trait ExactInteger: Clone + Integer + Signed + FromPrimitive + Debug + Display {}

impl ExactInteger for i32 {}
impl ExactInteger for i64 {}
impl ExactInteger for i128 {}
impl ExactInteger for BigInt {}
