//! Scalar abstraction for every continuous quantity in the crate.
//!
//! Coefficient matrices of scoring systems are integers and stay `i64`;
//! everything that is genuinely real-valued (relaxation values, rates,
//! objective values, tolerances) is generic over [`Real`] so the whole
//! pipeline runs on `f32` or `f64`. The crate root exposes `f64` aliases.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by models, metrics and solvers.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

/// Lossless-enough conversion from `f64` literals (tolerances, config defaults).
#[inline]
pub fn rf<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("finite f64 must convert into the scalar type")
}

/// Conversion from counts.
#[inline]
pub fn ru<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("count must convert into the scalar type")
}

/// Conversion from signed integers (coefficients, bounds).
#[inline]
pub fn ri<F: Real>(n: i64) -> F {
    F::from_i64(n).expect("integer must convert into the scalar type")
}
