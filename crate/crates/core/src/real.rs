use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Floating-point scalar used by every numeric routine in the crate.
///
/// Blanket-implemented for `f32` and `f64` (and anything else satisfying the
/// bounds). `Signed` is required so that `rustfft`'s blanket `FftNum` impl
/// applies to every `Real`. The helpers panic only on conversions that
/// cannot fail for finite machine floats.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Signed
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize conversion")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("to f64")
    }

    /// 0.5 as `Self`, used often enough to deserve a name.
    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Signed
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
