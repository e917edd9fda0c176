//! Scalar abstraction shared by every numerical kernel in the crate.
//!
//! All geometry, stencil and solver code is written against [`Scalar`], which
//! is implemented for `f32` and `f64`. The crate root re-exports `f64`
//! aliases for the common types.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst};

/// Floating point type usable by the solver.
pub trait Scalar: Float + FloatConst + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FloatConst + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from(x).expect("literal representable in scalar type")
}

/// Converts a count or index into the working scalar type.
#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from(n).expect("integer representable in scalar type")
}

pub type Vec3<T> = [T; 3];

#[inline]
pub fn dot<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm<T: Scalar>(a: &Vec3<T>) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale<T: Scalar>(a: &Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}
