//! Float intrinsics that `core` does not provide.
//!
//! With the `std` feature these forward to the platform math library,
//! otherwise to `libm`.

#[cfg(feature = "std")]
mod imp {
    extern crate std;

    #[inline]
    pub(crate) fn ln(x: f64) -> f64 {
        x.ln()
    }

    #[inline]
    pub(crate) fn exp(x: f64) -> f64 {
        x.exp()
    }

    #[inline]
    pub(crate) fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }

    #[inline]
    pub(crate) fn round(x: f64) -> f64 {
        x.round()
    }
}

#[cfg(not(feature = "std"))]
mod imp {
    #[inline]
    pub(crate) fn ln(x: f64) -> f64 {
        libm::log(x)
    }

    #[inline]
    pub(crate) fn exp(x: f64) -> f64 {
        libm::exp(x)
    }

    #[inline]
    pub(crate) fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }

    #[inline]
    pub(crate) fn round(x: f64) -> f64 {
        libm::round(x)
    }
}

pub(crate) use imp::{exp, ln, round, sqrt};

/// `ln(2π)`.
pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;
