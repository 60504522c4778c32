//! Scalar abstraction: every distance, kernel, and bound in this crate is
//! generic over a floating-point type implementing [`Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the toolkit is generic over: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
///
/// Infallible for `f32`/`f64`: conversion rounds, it never rejects.
pub fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Lossy view of a scalar as `f64`, used at the JSON boundary.
pub fn to_f64<F: Real>(x: F) -> f64 {
    x.to_f64().expect("scalar must convert to f64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_f64() {
        let x: f64 = real(0.1);
        assert_eq!(x, 0.1);
        assert_eq!(to_f64(x), 0.1);
    }

    #[test]
    fn converts_to_f32() {
        let x: f32 = real(2.5);
        assert_eq!(x, 2.5f32);
    }

    #[test]
    fn infinity_passes_through() {
        let x: f64 = real(f64::INFINITY);
        assert!(x.is_infinite());
    }
}
