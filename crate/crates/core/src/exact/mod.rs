//! Exact rational and polynomial arithmetic.

mod point;
mod poly;
mod rational;

pub use point::{format_points, parse_points, Point};
pub use poly::{from_roots, poly_product, Polynomial};
pub use rational::{rational_arith, ArithOp, FloatFormat, Rational};
