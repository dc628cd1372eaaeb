use super::scalar::{Tracked, Value};
use super::tree::RowProgram;
use super::{ChannelSum, ConvConfig, Precision, Tensor};
use crate::error::{Error, Result};
use crate::exact::FloatFormat;
use crate::matrix::{Dims, TransformSet};

/// Balanced recursive summation, splitting at `len / 2`.
pub fn pairwise_sum(values: &[f64], format: FloatFormat) -> f64 {
    assert!(!values.is_empty(), "pairwise_sum of an empty list");
    let v: Vec<f64> = values.iter().map(|x| x.convert(format)).collect();
    pairwise(&v, format)
}

/// Left-to-right summation.
pub fn linear_sum(values: &[f64], format: FloatFormat) -> f64 {
    assert!(!values.is_empty(), "linear_sum of an empty list");
    let v: Vec<f64> = values.iter().map(|x| x.convert(format)).collect();
    linear(&v, format)
}

fn pairwise<V: Value>(values: &[V], format: FloatFormat) -> V {
    match values.len() {
        0 => V::zero(),
        1 => values[0],
        len => {
            let (l, r) = values.split_at(len / 2);
            pairwise(l, format).add(pairwise(r, format), format)
        }
    }
}

fn linear<V: Value>(values: &[V], format: FloatFormat) -> V {
    let mut iter = values.iter();
    let first = iter.next().copied().unwrap_or_else(V::zero);
    iter.fold(first, |acc, v| acc.add(*v, format))
}

fn channel_sum<V: Value>(values: &[V], how: ChannelSum, format: FloatFormat) -> V {
    match how {
        ChannelSum::Linear => linear(values, format),
        ChannelSum::Pairwise => pairwise(values, format),
    }
}

fn output_len(x_size: usize, h_size: usize) -> Result<usize> {
    if h_size > x_size {
        return Err(Error::Shape(format!("kernel of size {h_size} is larger than input of size {x_size}")));
    }
    Ok(x_size - h_size + 1)
}

fn check_pair(h: &Tensor, x: &Tensor) -> Result<()> {
    if h.dims() != x.dims() {
        return Err(Error::Shape("kernel and input dimensionality differ".into()));
    }
    if h.channels() != x.channels() {
        return Err(Error::Shape(format!(
            "kernel has {} channel(s), input has {}",
            h.channels(),
            x.channels()
        )));
    }
    Ok(())
}

/// Direct valid-region correlation, channel results summed linearly.
pub fn conv_direct(h: &Tensor, x: &Tensor, precision: Precision) -> Result<Tensor> {
    conv_direct_with(h, x, precision, ChannelSum::Linear)
}

/// Direct valid-region correlation in the working format of `precision`.
///
/// Each output is a left-to-right dot product over kernel taps (row-major in
/// 2D); channel results are then combined per `how`.
pub fn conv_direct_with(h: &Tensor, x: &Tensor, precision: Precision, how: ChannelSum) -> Result<Tensor> {
    check_pair(h, x)?;
    let n_o = output_len(x.size(), h.size())?;
    let fmt = precision.inner_format();
    let (kh, kx) = (h.size(), x.size());
    let dims = h.dims();
    let out_len = n_o.pow(dims.count());
    let mut per_channel = vec![0.0f64; h.channels()];
    let mut out = Vec::with_capacity(out_len);
    for o in 0..out_len {
        let (oi, oj) = (o / n_o, o % n_o);
        for (c, slot) in per_channel.iter_mut().enumerate() {
            let (hc, xc) = (h.channel(c), x.channel(c));
            let mut acc: Option<f64> = None;
            let mut tap = |hv: f64, xv: f64| {
                let p = hv.convert(fmt).mul(xv.convert(fmt), fmt);
                acc = Some(match acc {
                    None => p,
                    Some(a) => a.add(p, fmt),
                });
            };
            match dims {
                Dims::One => {
                    for j in 0..kh {
                        tap(hc[j], xc[o + j]);
                    }
                }
                Dims::Two => {
                    for a in 0..kh {
                        for b in 0..kh {
                            tap(hc[a * kh + b], xc[(oi + a) * kx + oj + b]);
                        }
                    }
                }
            }
            *slot = acc.unwrap_or(0.0);
        }
        out.push(channel_sum(&per_channel, how, fmt));
    }
    Tensor::new(dims, 1, n_o, out)
}

fn check_transform(ts: &TransformSet, h: &Tensor, x: &Tensor, dims: Dims) -> Result<()> {
    check_pair(h, x)?;
    if h.dims() != dims {
        return Err(Error::Shape(format!("expected {}D tensors", dims.count())));
    }
    if h.size() != ts.n_h() || x.size() != ts.n() {
        return Err(Error::Shape(format!(
            "{} needs kernel size {} and input size {}, got {} and {}",
            ts.descriptor(),
            ts.n_h(),
            ts.n(),
            h.size(),
            x.size()
        )));
    }
    Ok(())
}

/// Apply each row program to one strided vector.
#[inline]
fn apply<V: Value>(
    progs: &[RowProgram],
    src: &[V],
    offset: usize,
    stride: usize,
    fmt: FloatFormat,
    dst: &mut [V],
    dst_offset: usize,
    dst_stride: usize,
) {
    for (i, p) in progs.iter().enumerate() {
        dst[dst_offset + i * dst_stride] = p.eval(|j| src[offset + j * stride], fmt);
    }
}

/// `M v` for every channel vector, 1D; `M X M^T` in 2D (columns first, then rows).
fn transform<V: Value>(progs: &[RowProgram], cols: usize, src: &[V], dims: Dims, fmt: FloatFormat) -> Vec<V> {
    let rows = progs.len();
    match dims {
        Dims::One => {
            let mut out = vec![V::zero(); rows];
            apply(progs, src, 0, 1, fmt, &mut out, 0, 1);
            out
        }
        Dims::Two => {
            // src is cols x cols; tmp = M src is rows x cols; out = tmp M^T is rows x rows.
            let mut tmp = vec![V::zero(); rows * cols];
            for c in 0..cols {
                apply(progs, src, c, cols, fmt, &mut tmp, c, cols);
            }
            let mut out = vec![V::zero(); rows * rows];
            for r in 0..rows {
                apply(progs, &tmp, r * cols, 1, fmt, &mut out, r * rows, 1);
            }
            out
        }
    }
}

/// The Toom-Cook pipeline over any [`Value`] type. Returns the output values
/// in the inner format, row-major.
pub(crate) fn pipeline<V: Value>(
    ts: &TransformSet,
    h: &Tensor,
    x: &Tensor,
    dims: Dims,
    cfg: &ConvConfig,
) -> Result<Vec<V>> {
    check_transform(ts, h, x, dims)?;
    let tf = cfg.precision.transform_format();
    let inner = cfg.precision.inner_format();
    let trees = ts.trees();
    let g = trees.g.programs(cfg.dot_order);
    let b_t = trees.b_t.programs(cfg.dot_order);
    let a_t = trees.a_t.programs(cfg.dot_order);
    let n = ts.n();
    let points = n.pow(dims.count());
    let channels = h.channels();

    let mut hadamard: Vec<Vec<V>> = Vec::with_capacity(channels);
    for c in 0..channels {
        let hc: Vec<V> = h.channel(c).iter().map(|&v| V::input(v).convert(tf)).collect();
        let xc: Vec<V> = x.channel(c).iter().map(|&v| V::input(v).convert(tf)).collect();
        let gh = transform(g, ts.n_h(), &hc, dims, tf);
        let bx = transform(b_t, n, &xc, dims, tf);
        hadamard.push(
            gh.iter()
                .zip(&bx)
                .map(|(u, v)| u.convert(inner).mul(v.convert(inner), inner))
                .collect(),
        );
    }
    let mut summed = Vec::with_capacity(points);
    let mut column = Vec::with_capacity(channels);
    for k in 0..points {
        column.clear();
        column.extend(hadamard.iter().map(|m| m[k]));
        summed.push(channel_sum(&column, cfg.channel_sum, inner).convert(tf));
    }
    let out = transform(a_t, n, &summed, dims, tf);
    Ok(out.into_iter().map(|v| v.convert(inner)).collect())
}

pub fn conv_1d(ts: &TransformSet, h: &Tensor, x: &Tensor, cfg: &ConvConfig) -> Result<Tensor> {
    let out = pipeline::<f64>(ts, h, x, Dims::One, cfg)?;
    Tensor::new(Dims::One, 1, ts.n_o(), out)
}

pub fn conv_2d(ts: &TransformSet, h: &Tensor, x: &Tensor, cfg: &ConvConfig) -> Result<Tensor> {
    let out = pipeline::<f64>(ts, h, x, Dims::Two, cfg)?;
    Tensor::new(Dims::Two, 1, ts.n_o(), out)
}

/// 1D or 2D according to the tensors.
pub fn conv(ts: &TransformSet, h: &Tensor, x: &Tensor, cfg: &ConvConfig) -> Result<Tensor> {
    match h.dims() {
        Dims::One => conv_1d(ts, h, x, cfg),
        Dims::Two => conv_2d(ts, h, x, cfg),
    }
}

/// Toom-Cook convolution with a running error bound per output element.
///
/// The values are bitwise equal to [`conv`]; the bound is a first-order
/// bound on the distance to the exact convolution of the given inputs.
pub fn conv_tracked(ts: &TransformSet, h: &Tensor, x: &Tensor, cfg: &ConvConfig) -> Result<(Tensor, Vec<f64>)> {
    let dims = h.dims();
    let out = pipeline::<Tracked>(ts, h, x, dims, cfg)?;
    let values = out.iter().map(|t| t.value).collect();
    let bounds = out.iter().map(|t| t.bound).collect();
    Ok((Tensor::new(dims, 1, ts.n_o(), values)?, bounds))
}
