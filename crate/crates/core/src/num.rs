//! Scalar abstraction for suspiciousness scores.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type a score can be computed in (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts a count without going through a fallible cast at every call site.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }

    /// Lossless widening used for formatting and tie keys.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Key used to decide whether two scores are tied: the value rounded to 12
/// significant digits. Infinities map to themselves.
pub fn tie_key<T: Scalar>(value: T) -> f64 {
    let v = value.to_f64_lossy();
    if !v.is_finite() || v == 0.0 {
        // folds -0.0 into 0.0
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}
