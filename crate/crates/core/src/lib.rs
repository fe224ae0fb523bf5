//! Numerical umbral calculus.
//!
//! An umbra is a generating function 𝒜 on a horizontal strip; f(A) is
//! evaluated by moment series, by contour integration against the strip
//! Fourier transform Â, by Gauss–Weierstrass damping, or (for the Bernoulli
//! umbra) by an Euler–Maclaurin tail limit. On top of that sit
//! Müller–Schleicher fractional sums with complex endpoints and the Gosper
//! Bessel-series identities.

// NaN-rejecting `!(x > y)` guards and index loops that mirror the formulas
// are intended.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod contour;
pub mod error;
pub mod eval;
pub mod expr;
pub mod fracsum;
pub mod gosper;
pub mod identities;
pub mod numerics;
pub mod special;
pub mod umbra;

pub use error::{Error, Result};
pub use numerics::{Estimate, C64};
