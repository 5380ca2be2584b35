//! Scalar abstraction shared by every module.
//!
//! All state algebra is generic over a real floating-point type `T`; amplitudes are
//! `Complex<T>`. Tolerances scale with the precision of `T`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar usable as the amplitude component type.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Amplitudes with modulus below this are pruned from sparse states.
    fn tolerance() -> Self;

    /// Converts a literal, panicking only for values not representable in `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f64 {
    fn tolerance() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn tolerance() -> Self {
        1e-6
    }
}

/// Complex amplitude over a real scalar.
pub type Amplitude<T> = Complex<T>;

pub(crate) fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
