//! Scalar abstractions shared by the signal-processing and decoding code.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Add;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive, Zero};

/// Floating point scalar used for channel matrices, constellations and bit metrics.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + PathMetric + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    /// Tolerance used by iterative routines that were specified for `f64`.
    ///
    /// Clamped to a few ulps for narrower types so iterations terminate.
    fn tolerance(requested: f64) -> Self {
        Self::lit(requested).max(Self::epsilon() * Self::lit(8.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Additive path cost accumulated by the Viterbi decoder.
///
/// Integer metrics compare exactly, which makes them convenient for
/// exhaustive cross-checks; floating point metrics are what the simulator uses.
pub trait PathMetric: Copy + PartialOrd + Add<Output = Self> + Zero + Debug + Send + Sync {
    fn is_finite_metric(&self) -> bool;
}

macro_rules! int_metric {
    ($($t:ty),*) => {$(
        impl PathMetric for $t {
            fn is_finite_metric(&self) -> bool {
                true
            }
        }
    )*};
}

int_metric!(i32, i64, u32, u64);

impl PathMetric for f32 {
    fn is_finite_metric(&self) -> bool {
        self.is_finite()
    }
}

impl PathMetric for f64 {
    fn is_finite_metric(&self) -> bool {
        self.is_finite()
    }
}
