//! Pointwise calculus on `T ⊕ T*` for a real vector space `T = ℝⁿ`.
//!
//! Forms double as spinors for `Spin(n,n)`; on top of that sit generalised
//! metrics, Dirac spinors and their bilinears, pure spinors of isotropic
//! pairs, the calibration bound, and T-duality along a chosen direction.
//! A small polynomial layer provides exterior derivatives in one chart.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is on.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::manual_is_multiple_of)]

extern crate alloc;

pub mod calibration;
pub mod clifford;
pub mod dirac;
pub mod error;
pub mod exterior;
pub mod fieldforms;
pub mod genmetric;
pub mod linalg;
pub mod literal;
pub mod poly;
pub mod purespinor;
pub mod sample;
pub mod scalar;
pub mod tduality;

pub use error::{CoreError, Result};
pub use exterior::{Form, GenVector};
pub use linalg::Matrix;
pub use scalar::{Complex64, Rational, Scalar};
