//! Toeplitz and Hankel operators between Hardy-type spaces on the unit
//! circle, on a finite grid.

mod error;
mod search;
mod verdict;

pub mod analytic;
pub mod circle;
pub mod compactness;
pub mod exponent;
pub mod nehari;
pub mod operators;
pub mod spaces;

pub use error::{Error, Result};
pub use verdict::Verdict;
