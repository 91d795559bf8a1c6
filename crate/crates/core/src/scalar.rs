//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Real scalar: `f32` or `f64`.
///
/// `DEFAULT_TOL` is the comparison tolerance a freshly built
/// [`Tolerances`] uses for this type. The reference values (`1e-9`) only make
/// sense in double precision, so `f32` gets a looser default.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Serialize
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    const DEFAULT_TOL: f64;
    /// Tolerance for long products (relations, restricted actions).
    const DEFAULT_LOOSE_TOL: f64;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// `-cos(pi/m)`.
    fn neg_cos_pi_over(m: u32) -> Self {
        -(Self::PI() / Self::of(f64::from(m))).cos()
    }
}

impl Scalar for f64 {
    const DEFAULT_TOL: f64 = 1e-9;
    const DEFAULT_LOOSE_TOL: f64 = 1e-6;
}

impl Scalar for f32 {
    const DEFAULT_TOL: f64 = 1e-4;
    const DEFAULT_LOOSE_TOL: f64 = 1e-3;
}

/// Numeric thresholds used throughout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Equality of reals (Gram entries, involution checks, ...).
    pub eq: T,
    /// Pivot threshold for elimination and rank decisions.
    pub pivot: T,
    /// Relation checks on long words.
    pub loose: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            eq: T::of(T::DEFAULT_TOL),
            pivot: T::of(T::DEFAULT_TOL),
            loose: T::of(T::DEFAULT_LOOSE_TOL),
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    /// Same tolerance for equality and pivoting, loose threshold left at its default.
    pub fn with_eq(eq: T) -> Self {
        Self { eq, pivot: eq, ..Self::default() }
    }
}
