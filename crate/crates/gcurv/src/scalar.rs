//! Scalar abstraction for the numerical core.
//!
//! Every algorithm in this crate is generic over a floating-point scalar `F:
//! Real`, so the whole pipeline can be instantiated at `f64` (the default,
//! re-exported through the type aliases at the crate root) or at `f32` for
//! quick low-precision runs. `Real` is a thin umbrella over the `num-traits`
//! hierarchy plus the conversions the stencil and quadrature code needs.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar usable by every module in this crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal or intermediate.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion must succeed for a Real scalar")
    }

    /// Lossy conversion to `f64` (for reporting and serialization).
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Real scalar must convert to f64")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the crate scalar.
pub type C<F> = Complex<F>;

/// log(1/|z|), the ubiquitous singular scale of the paper.
pub fn log_recip<F: Real>(r: F) -> F {
    (F::one() / r).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn of_round_trips_both_widths() {
        assert_eq!(<f64 as Real>::of(0.25), 0.25);
        assert_eq!(<f32 as Real>::of(0.25), 0.25f32);
        assert_eq!(0.25f64.to_f64_lossy(), 0.25);
    }

    #[test]
    fn log_recip_matches_closed_form() {
        let r = 0.1f64;
        assert!((log_recip(r) - (10.0f64).ln()).abs() < 1e-15);
    }
}
