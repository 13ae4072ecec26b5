//! Numeric trait bounds shared across the crate.

use std::fmt::Debug;

use nalgebra::RealField;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Scalar for diagonal-state arithmetic.
///
/// Only field operations and ordering are needed, so exact rationals qualify
/// alongside `f32`/`f64`.
pub trait Scalar:
    Num + Signed + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync
{
    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Converts an `f64` constant into the scalar type.
    ///
    /// Panics only for non-finite input, which is never passed internally.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync
{
}

/// Real field for the spin simulator (`f32` or `f64`).
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }
}

impl<T> Real for T where T: RealField + Copy + FromPrimitive + ToPrimitive {}
