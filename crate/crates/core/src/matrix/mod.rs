//! Toom-Cook transform construction.
//!
//! A [`TransformSet`] holds the output, kernel and input transforms
//! (`A^T`, `G`, `B^T`) for one `(n_h, n_o, points)` choice. Entries are built
//! in exact rational arithmetic and rounded once to each float format.

mod builder;
mod count;
mod dense;
mod file;

pub use builder::{build, build_modified, build_toom_cook, chebyshev_points, TransformSet};
pub use count::{mult_count, Dims, MultCount};
pub use dense::Matrix;
pub use file::{MatrixFile, RoundedTriple};
