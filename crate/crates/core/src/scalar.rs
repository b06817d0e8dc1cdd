//! Scalar abstraction shared by every numerical kernel in the crate.
//!
//! All physics is written against [`Real`], which is implemented for `f32`
//! and `f64`. Tolerances are stated for double precision and rescaled to the
//! working precision through [`Real::tol`].

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

use crate::linalg::Dense;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + NumAssign + Default + Debug + Display + LowerExp + Dense + Send + Sync + 'static
{
    /// Converts an `f64` literal into the working precision.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable in working precision")
    }

    /// Rescales a tolerance stated for `f64` to the working precision.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x) * (Self::epsilon() / Self::lit(f64::EPSILON))
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        Self::from(n).expect("usize representable in working precision")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the working precision.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> Cx<T> {
    Complex::new(phase.cos(), phase.sin())
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x - two_pi * (x / two_pi).round();
    if y <= -T::PI() {
        y += two_pi;
    } else if y > T::PI() {
        y -= two_pi;
    }
    y
}
