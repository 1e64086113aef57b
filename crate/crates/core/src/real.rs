//! Scalar abstraction shared by the f64 fast path and the double-double
//! re-evaluation path.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Real scalar used by every evaluator in the crate.
///
/// Implemented for `f64` and for [`Dd`](crate::dd::Dd). Parameter values
/// always enter as `f64` through [`Real::from_f64`], so both paths see
/// exactly the same inputs.
pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    const ZERO: Self;
    const ONE: Self;

    /// Unit roundoff of the representation.
    const EPSILON: f64;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;

    fn pi() -> Self;
    fn abs(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    /// `sin(pi * self)`, reduced exactly before the transcendental call.
    fn sin_pi(self) -> Self;

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    /// `self^e` for positive `self`, as `exp(e ln self)`.
    fn powr(self, e: Self) -> Self {
        (e * self.ln()).exp()
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::ONE / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const EPSILON: f64 = f64::EPSILON;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn pi() -> Self {
        std::f64::consts::PI
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin_pi(self) -> Self {
        let n = self.round();
        let y = self - n;
        let s = (std::f64::consts::PI * y).sin();
        if (n as i64) % 2 == 0 {
            s
        } else {
            -s
        }
    }
    #[inline]
    fn powr(self, e: Self) -> Self {
        f64::powf(self, e)
    }
}

/// True when `v` is a non-negative integer small enough to index a product.
pub(crate) fn as_index(v: f64) -> Option<u32> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Some(v as u32)
    } else {
        None
    }
}
