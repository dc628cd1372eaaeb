//! Fixed-size convolution through a [`TransformSet`](crate::matrix::TransformSet).
//!
//! The pipeline is written once over the [`Value`] trait and instantiated for
//! plain `f64` values and for values carrying a running error bound. fp32
//! arithmetic is emulated exactly on `f64` storage; no operation is fused.

mod config;
mod conv;
pub mod exact;
mod scalar;
mod tensor;
mod tree;

pub use config::{ChannelSum, ConvConfig, DotOrder, Precision};
pub use conv::{conv, conv_1d, conv_2d, conv_direct, conv_direct_with, conv_tracked, linear_sum, pairwise_sum};
pub use scalar::{round_to, Coef, Tracked, Value};
pub use tensor::Tensor;
pub use tree::{
    dot_with_order, eval_tree, huffman_order, huffman_order_keyed, linear_order, EvalTree, Instr,
    MatrixPrograms, Node, RowProgram, TransformTrees,
};
