//! The multiplicative value group `ℤ_{m0}`: the integers written
//! multiplicatively (`ofAdd(n)`) with an absorbing zero adjoined below them.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Mul;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// An element of `ℤ_{m0}`.
///
/// The derived order is the value-group order: `Zero` is the least element and
/// `OfAdd(a) <= OfAdd(b)` exactly when `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MultIntZero {
    Zero,
    OfAdd(BigInt),
}

impl MultIntZero {
    pub fn of_add(n: impl Into<BigInt>) -> Self {
        MultIntZero::OfAdd(n.into())
    }

    /// The multiplicative identity `ofAdd(0)`.
    pub fn one() -> Self {
        MultIntZero::OfAdd(BigInt::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MultIntZero::Zero)
    }

    pub fn to_add(&self) -> Result<BigInt> {
        match self {
            MultIntZero::Zero => Err(Error::ZeroHasNoExponent),
            MultIntZero::OfAdd(n) => Ok(n.clone()),
        }
    }

    /// [`to_add`](Self::to_add) narrowed to a machine integer.
    pub fn to_add_i64(&self) -> Result<i64> {
        self.to_add()?.to_i64().ok_or(Error::ExponentOverflow)
    }

    pub fn le(&self, other: &Self) -> bool {
        self.cmp(other) != Ordering::Greater
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Less
    }
}

impl From<i64> for MultIntZero {
    fn from(n: i64) -> Self {
        MultIntZero::of_add(n)
    }
}

impl Mul for &MultIntZero {
    type Output = MultIntZero;

    fn mul(self, rhs: &MultIntZero) -> MultIntZero {
        match (self, rhs) {
            (MultIntZero::OfAdd(a), MultIntZero::OfAdd(b)) => MultIntZero::OfAdd(a + b),
            _ => MultIntZero::Zero,
        }
    }
}

impl Mul for MultIntZero {
    type Output = MultIntZero;

    fn mul(self, rhs: MultIntZero) -> MultIntZero {
        &self * &rhs
    }
}

impl fmt::Display for MultIntZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultIntZero::Zero => f.write_str("0"),
            MultIntZero::OfAdd(n) => write!(f, "ofAdd({})", n),
        }
    }
}
