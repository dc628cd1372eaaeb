use crate::engine::{conv_tracked, ConvConfig, Tensor};
use crate::error::{Error, Result};
use crate::matrix::{Dims, TransformSet};

/// One-dimensional convolution together with a running error bound per
/// output. Every rounding contributes `u |computed value|`, propagated
/// through later operations, so the bound is computed from actual values.
pub fn running_error_1d(ts: &TransformSet, h: &Tensor, x: &Tensor, cfg: &ConvConfig) -> Result<(Tensor, Vec<f64>)> {
    if h.dims() != Dims::One || x.dims() != Dims::One {
        return Err(Error::Shape("running_error_1d takes 1D tensors".into()));
    }
    conv_tracked(ts, h, x, cfg)
}
