//! Exact-arithmetic machinery for pairs of reproducing kernels.
//!
//! The crate decides complete-Pick / complete-Caratheodory style questions
//! for pairs of diagonal holomorphic kernels through Shimorin certificates:
//! master-certificate recursions, formal certificate verification,
//! Pick-matrix feasibility, Parrott completions of Caratheodory data and
//! Schur-complement kernel chains.
//!
//! Everything that decides a verdict runs over exact rationals
//! (`num_rational::BigRational`, Gaussian rationals for complex entries);
//! floating point appears only in oracle cross-checks and in the
//! square-root-bearing completion paths, always with an explicit tolerance.

pub mod catalog;
pub mod certificates;
pub mod error;
pub mod interpolation;
pub mod io;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod schurtools;
pub mod series;

pub use error::Error;
pub use scalar::{GaussRat, Rat, C64};
