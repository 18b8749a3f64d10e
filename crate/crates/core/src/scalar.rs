//! Scalar abstraction for the numeric kernels.
//!
//! All rate computations are generic over a floating-point scalar so the
//! same kernels run in `f32` or `f64`. Tolerances are expressed through the
//! trait so that single precision gets a workable normalization gate while
//! double precision keeps the strict defaults.

use num_traits::{Float, FromPrimitive, NumAssign};
use std::fmt;

/// Floating-point scalar used throughout the crate (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Send + Sync + fmt::Debug + fmt::Display + 'static
{
    /// Lossy conversion from `f64`, panicking only for non-representable NaN-free inputs.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 must convert to Scalar")
    }

    /// Tolerance for "sums to one" checks on probability data.
    ///
    /// 1e-12 in double precision; widened to a multiple of epsilon where
    /// 1e-12 is below the representable resolution.
    fn pmf_sum_tol() -> Self {
        let fixed = Self::from_f64_lossy(1e-12);
        let eps_scaled = Self::epsilon() * Self::from_f64_lossy(64.0);
        fixed.max(eps_scaled)
    }

    /// Probabilities at or below this are treated as exact zeros (0·log 0 = 0).
    fn prob_floor() -> Self {
        Self::from_f64_lossy(1e-15)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
