//! Exact valuation theory and adele-ring constructions over ℚ and quadratic
//! number fields ℚ(√d).
//!
//! Everything here is exact: rationals and field elements are big-integer
//! backed, valuations are integers, and the topological statements about
//! `𝒪_v`, `K_v` and the finite adeles are turned into certificates that can
//! be checked by finite computation (see [`topology`]). The only floating point
//! values are the numeric images at the infinite places.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod adele;
pub mod arith;
pub mod completion;
mod error;
pub mod number_field;
pub mod topology;
pub mod valuations;
pub mod value_group;

pub use error::{Error, Result};

pub use adele::{diagonal_embed, Adele, AdeleOp, FiniteAdele, InfiniteAdele, PlaceSet, SAdeleParts};
pub use arith::{Prime, Rat};
pub use completion::{LocalElement, ResidueElement};
pub use number_field::{
    Complex64, FieldElement, FinitePlace, InfinitePlace, NumberField, PrimeIdeal, QuadraticField,
};
pub use topology::{Ball, BasicOpen, CompactCert, ScaledIntegerBall};
pub use valuations::{AdditiveValue, RationalPlace, ValuationKind, ValuationReport};
pub use value_group::MultIntZero;
