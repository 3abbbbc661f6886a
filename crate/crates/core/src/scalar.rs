//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar the library computes in: `f32` or `f64`.
///
/// Tolerances quoted throughout the crate assume `f64`; `f32` instantiations
/// work but only reach single-precision accuracy.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal converts to every Scalar")
    }

    fn of_int(k: i64) -> Self {
        Self::from_i64(k).expect("integer converts to every Scalar")
    }

    fn of_usize(k: usize) -> Self {
        Self::from_usize(k).expect("usize converts to every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
