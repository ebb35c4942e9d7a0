//! Floating point scalar abstraction shared by every geometric module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used for coordinates and radii: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Default residual tolerance for the radius solver at this precision.
    const SOLVER_TOLERANCE: f64;
    /// Relative tolerance used when merging coincident points.
    const MERGE_TOLERANCE: f64;
    /// Largest relative tangency defect accepted by the layout.
    const LAYOUT_TOLERANCE: f64;

    /// Converts a literal. Panics only if `v` is not representable, which
    /// cannot happen for the finite constants used in this crate.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count fits in a float")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// `acos` with the argument clamped to `[-1, 1]`.
    #[inline]
    fn acos_clamped(self) -> Self {
        self.max(-Self::one()).min(Self::one()).acos()
    }
}

impl Scalar for f32 {
    const SOLVER_TOLERANCE: f64 = 1e-5;
    const MERGE_TOLERANCE: f64 = 1e-4;
    const LAYOUT_TOLERANCE: f64 = 1e-3;
}

impl Scalar for f64 {
    const SOLVER_TOLERANCE: f64 = 1e-10;
    const MERGE_TOLERANCE: f64 = 1e-8;
    const LAYOUT_TOLERANCE: f64 = 1e-6;
}
