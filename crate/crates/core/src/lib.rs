//! Toom-Cook ("Winograd") convolution: exact transform construction,
//! floating-point execution under several precision and summation schemes,
//! analytic error bounds and Monte-Carlo error measurement.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod exact;
pub mod harness;
pub mod matrix;

pub use error::{Error, Result};
