//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type usable for error rates, fidelities and statistics.
///
/// Implemented for `f32` and `f64`. Random sampling always happens in `f64`
/// and is converted, so results for `f32` differ from `f64` only by rounding.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Lossless-enough conversion from an `f64` literal or sample.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }

    /// Conversion of a count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable in every Scalar")
    }

    /// `true` for a value in the closed unit interval.
    fn is_probability(self) -> bool {
        self >= Self::zero() && self <= Self::one()
    }

    fn clamp_unit(self) -> Self {
        self.max(Self::zero()).min(Self::one())
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
