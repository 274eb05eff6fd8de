//! Floating-point scalar abstraction shared by the dense linear algebra.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real field the dense kernels are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance for exact-structure checks such as hermiticity or
    /// antisymmetry.
    fn structure_tol() -> Self;

    /// Relative threshold under which a singular value counts as zero.
    fn rank_tol() -> Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in every Real")
    }
}

impl Real for f64 {
    fn structure_tol() -> Self {
        1e-12
    }

    fn rank_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn structure_tol() -> Self {
        1e-5
    }

    fn rank_tol() -> Self {
        1e-5
    }
}

/// Complex scalar over a [`Real`] field.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> Cx<T> {
    Complex::new(T::one(), T::zero())
}
