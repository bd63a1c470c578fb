//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Degenerate-cell area threshold in m².
pub const DEGENERATE_AREA: f64 = 1e-12;

/// Rounds to nine significant digits (wire and file precision).
pub fn round_sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Formats a number with nine significant digits, falling back to the
/// shortest exact representation when nine digits would not round-trip.
pub fn format_sig9(x: f64) -> String {
    let rounded = round_sig9(x);
    if rounded.to_bits() == x.to_bits() {
        format!("{rounded}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digit_formatting() {
        assert_eq!(format_sig9(93.5), "93.5");
        assert_eq!(format_sig9(round_sig9(1.0 / 3.0)), "0.333333333");
        // not representable at nine digits: falls back to exact form
        let x = 1.0 / 3.0;
        assert_eq!(format_sig9(x).parse::<f64>().unwrap(), x);
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(-12.25), "-12.25");
    }

    #[test]
    fn literal_conversion() {
        assert_eq!(f32::lit(0.5), 0.5f32);
        assert_eq!(f64::lit(0.5).as_f64(), 0.5);
    }
}
