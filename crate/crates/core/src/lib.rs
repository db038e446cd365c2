//! Exact maximal-rank checks for unions of lines and rational curves meeting
//! a hypersurface, over a prime field.

pub mod error;
pub mod experiments;
pub mod field;
pub mod gallery;
pub mod geometry;
pub mod hilbert;
pub mod matrix;
pub mod poly;
pub mod trees;

pub use error::{Error, Result};
