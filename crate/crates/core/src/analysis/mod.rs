//! Worst-case error bounds, summation constants, norms and conditioning.
//!
//! Bounds are first order in the unit roundoff and evaluated in fp64 from
//! the exact transform matrices.

mod bounds;
mod constants;
mod khatri_rao;
mod norms;
mod running;
mod svd;

pub use bounds::{
    bound_1d, bound_2d, bound_modified_1d, bound_multichannel, channel_term, error_norm, BoundNorms, BoundReport,
    ModifiedBound,
};
pub use constants::{summation_constants, tree_constant, ElementClass, SumMethod, SummationConstants};
pub use khatri_rao::{khatri_rao_rowwise, kron};
pub use norms::{inf_norm, matrix_norms, norm1, norm2, MatrixNorms};
pub use running::running_error_1d;
pub use svd::{condition_bound, condition_number, conditioning_matrix, singular_values, ConditionReport};
