use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar for every numerical routine in this crate: `f32` or `f64`.
///
/// All tolerances and defaults are stated for `f64`; with `f32` they should be
/// relaxed by the caller to match the wider machine epsilon.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` constant (tolerance, coefficient, default) into `F`.
pub(crate) fn cast<F: Scalar>(v: f64) -> F {
    F::from_f64(v).expect("f64 constant must be representable in the scalar type")
}
