//! Scalar abstraction shared by the linear solver and the profile evaluators.
//!
//! The same elimination and evaluation code runs over exact rationals, over
//! rational functions of the discount parameter, and over machine floats.

use std::cmp::Reverse;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

/// A commutative field usable by [`crate::algebra::solve_linear`].
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Ordering used to pick elimination pivots; smaller is preferred.
    type PivotKey: Ord;

    /// Embeds an exact rational into the field (rounding for floats).
    fn from_rational(r: &BigRational) -> Self;

    /// `None` when the element cannot serve as a pivot (it is zero).
    fn pivot_key(&self) -> Option<Self::PivotKey>;

    /// Whether arithmetic is exact, so that results can be verified by
    /// substitution with `==`.
    fn is_exact() -> bool;
}

impl Field for BigRational {
    type PivotKey = u64;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn pivot_key(&self) -> Option<u64> {
        if self.is_zero() {
            None
        } else {
            Some(self.numer().bits() + self.denom().bits())
        }
    }

    fn is_exact() -> bool {
        true
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            // Largest magnitude first; non-negative IEEE bit patterns sort like the values.
            type PivotKey = Reverse<u64>;

            fn from_rational(r: &BigRational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn pivot_key(&self) -> Option<Reverse<u64>> {
                if *self == 0.0 || !self.is_finite() {
                    None
                } else {
                    Some(Reverse((self.abs() as f64).to_bits()))
                }
            }

            fn is_exact() -> bool {
                false
            }
        }
    };
}

float_field!(f32);
float_field!(f64);

/// Floating-point scalar for the numeric solvers.
pub trait Real: Float + Field + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Rounds an exact rational to the nearest representable float of type `T`.
pub fn to_real<T: Real>(r: &BigRational) -> T {
    T::from_rational(r)
}
