//! Scalar abstraction for continuous chart geometry.
//!
//! Mark geometry, label sizes and offsets are generic over [`Scalar`] so the
//! same engine runs on `f32` or `f64` coordinates. Pixel data (the occupancy
//! bitmap, [`PixelRect`](crate::PixelRect)) is always integral.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type usable as a chart coordinate.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    const HALF: Self;
    const TWO: Self;

    /// Converts a literal constant. Panics only if the literal is not
    /// representable, which cannot happen for `f32`/`f64`.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn from_i64_lossy(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable in scalar type")
    }

    /// `floor(self)` as an integer, saturating on overflow and mapping NaN to 0.
    fn floor_i64(self) -> i64 {
        self.floor().to_i64().unwrap_or_else(|| saturate(self))
    }

    fn ceil_i64(self) -> i64 {
        self.ceil().to_i64().unwrap_or_else(|| saturate(self))
    }
}

fn saturate<T: Float>(v: T) -> i64 {
    if v.is_nan() {
        0
    } else if v > T::zero() {
        i64::MAX / 4
    } else {
        i64::MIN / 4
    }
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const HALF: Self = 0.5;
            const TWO: Self = 2.0;
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);
