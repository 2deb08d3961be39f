//! Scalar bounds shared by every module.
//!
//! `Scalar` is a commutative ring with exact small-integer embedding; it is
//! enough for polynomial calculus on S³ and is met by `f32`, `f64` and
//! `Rational64`.  `Real` adds floating point structure for quadrature
//! and finite differences.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("small integers embed in every scalar")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Num + Neg<Output = T> + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

pub trait Real: Scalar + Float + Copy {
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 converts")
    }
}

impl Real for f32 {}
impl Real for f64 {}
