use serde::{Deserialize, Serialize};

use super::constants::{ElementClass, SummationConstants};
use super::norms::{abs_mul_vec, inf_norm, matrix_norms, norm2, to_f64};
use crate::engine::{huffman_order_keyed, linear_order, ChannelSum, DotOrder, EvalTree, Tensor};
use crate::error::{Error, Result};
use crate::exact::{FloatFormat, Rational};
use crate::matrix::{Dims, Matrix, TransformSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundNorms {
    pub a_t_one: f64,
    /// `||A||_1`, the maximum absolute row sum of `A^T`.
    pub a_one: f64,
    pub g_frobenius: f64,
    pub b_t_frobenius: f64,
    /// `||h||_2` (or `||H||_F`), maximized over channels.
    pub h_norm: f64,
    pub x_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub descriptor: String,
    pub dims: Dims,
    pub channels: usize,
    pub channel_sum: Option<ChannelSum>,
    pub epsilon: f64,
    pub constants: SummationConstants,
    /// Channel term; 0 for a single-channel bound.
    pub lambda: f64,
    /// The multiplier `R` of `epsilon`.
    pub factor: f64,
    pub norms: BoundNorms,
    pub normwise_bound: f64,
    /// Row-major, `n_o^dims` entries.
    pub componentwise_bounds: Vec<f64>,
}

impl BoundReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn max_componentwise(&self) -> f64 {
        self.componentwise_bounds.iter().copied().fold(0.0, f64::max)
    }
}

/// `lambda(C)`: `C` for linear and `floor(log2 C) + 2` for pairwise summation.
pub fn channel_term(channels: usize, how: ChannelSum) -> f64 {
    match how {
        ChannelSum::Linear => channels as f64,
        ChannelSum::Pairwise => (channels.max(1).ilog2() + 2) as f64,
    }
}

/// The norm the normwise bounds control: `||e||_1` in 1D, the induced
/// 1-norm (maximum column sum) of the error matrix in 2D.
pub fn error_norm(dims: Dims, n_o: usize, diff: &[f64]) -> f64 {
    match dims {
        Dims::One => diff.iter().map(|v| v.abs()).sum(),
        Dims::Two => (0..n_o)
            .map(|j| (0..n_o).map(|i| diff[i * n_o + j].abs()).sum::<f64>())
            .fold(0.0, f64::max),
    }
}

struct Parts {
    a_t: Matrix<f64>,
    g: Matrix<f64>,
    b_t: Matrix<f64>,
    norms: BoundNorms,
}

fn parts(ts: &TransformSet, h: &Tensor, x: &Tensor, dims: Dims) -> Result<Parts> {
    let n = ts.n();
    if h.dims() != dims || x.dims() != dims {
        return Err(Error::Shape(format!("expected {}D tensors", dims.count())));
    }
    if h.size() != ts.n_h() || x.size() != n {
        return Err(Error::Shape(format!(
            "kernel size {} and input size {} do not match {}",
            h.size(),
            x.size(),
            ts.descriptor()
        )));
    }
    if h.channels() != x.channels() {
        return Err(Error::Shape("kernel and input channel counts differ".into()));
    }
    let (a_t, g, b_t) = (to_f64(ts.a_t()), to_f64(ts.g()), to_f64(ts.b_t()));
    let max_norm = |t: &Tensor| (0..t.channels()).map(|c| norm2(t.channel(c))).fold(0.0, f64::max);
    let norms = BoundNorms {
        a_t_one: matrix_norms(&a_t).one_norm,
        a_one: inf_norm(&a_t),
        g_frobenius: matrix_norms(&g).frobenius,
        b_t_frobenius: matrix_norms(&b_t).frobenius,
        h_norm: max_norm(h),
        x_norm: max_norm(x),
    };
    Ok(Parts { a_t, g, b_t, norms })
}

fn abs_vec(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.abs()).collect()
}

/// `|A^T| (|G||h| . |B^T||x|)` summed over channels, before the factor.
fn componentwise_1d(p: &Parts, h: &Tensor, x: &Tensor) -> Vec<f64> {
    let mut acc = vec![0.0; p.g.rows()];
    for c in 0..h.channels() {
        let gh = abs_mul_vec(&p.g, &abs_vec(h.channel(c)));
        let bx = abs_mul_vec(&p.b_t, &abs_vec(x.channel(c)));
        for (a, (u, v)) in acc.iter_mut().zip(gh.iter().zip(&bx)) {
            *a += u * v;
        }
    }
    abs_mul_vec(&p.a_t, &acc)
}

/// `|A^T| (|G||H||G^T| . |B^T||X||B|) |A|` summed over channels.
fn componentwise_2d(p: &Parts, h: &Tensor, x: &Tensor) -> Vec<f64> {
    let n = p.g.rows();
    let (g, b_t, a_t) = (p.g.abs(), p.b_t.abs(), p.a_t.abs());
    let mut acc = Matrix::filled(n, n, 0.0);
    for c in 0..h.channels() {
        let hm = Matrix::from_fn(h.size(), h.size(), |i, j| h.channel(c)[i * h.size() + j].abs());
        let xm = Matrix::from_fn(x.size(), x.size(), |i, j| x.channel(c)[i * x.size() + j].abs());
        let gh = g.matmul(&hm).matmul(&g.transpose());
        let bx = b_t.matmul(&xm).matmul(&b_t.transpose());
        acc = Matrix::from_fn(n, n, |i, j| acc[(i, j)] + gh[(i, j)] * bx[(i, j)]);
    }
    a_t.matmul(&acc).matmul(&a_t.transpose()).as_slice().to_vec()
}

fn report(
    ts: &TransformSet,
    h: &Tensor,
    x: &Tensor,
    dims: Dims,
    consts: &SummationConstants,
    format: FloatFormat,
    channel_sum: Option<ChannelSum>,
) -> Result<BoundReport> {
    let p = parts(ts, h, x, dims)?;
    let channels = h.channels();
    if channel_sum.is_none() && channels != 1 {
        return Err(Error::Shape("single-channel bound given multi-channel tensors".into()));
    }
    let lambda = channel_sum.map_or(0.0, |how| channel_term(channels, how));
    let base = match dims {
        Dims::One => consts.factor_1d(),
        Dims::Two => consts.factor_2d(),
    };
    let factor = base + lambda;
    let eps = format.unit_roundoff();
    let nm = &p.norms;
    let matrices = match dims {
        Dims::One => nm.a_t_one * nm.g_frobenius * nm.b_t_frobenius,
        Dims::Two => nm.a_t_one * nm.a_one * (nm.g_frobenius * nm.b_t_frobenius).powi(2),
    };
    let normwise_bound = channels as f64 * matrices * nm.h_norm * nm.x_norm * factor * eps;
    let raw = match dims {
        Dims::One => componentwise_1d(&p, h, x),
        Dims::Two => componentwise_2d(&p, h, x),
    };
    Ok(BoundReport {
        descriptor: ts.descriptor(),
        dims,
        channels,
        channel_sum,
        epsilon: eps,
        constants: consts.clone(),
        lambda,
        factor,
        norms: p.norms,
        normwise_bound,
        componentwise_bounds: raw.into_iter().map(|v| v * factor * eps).collect(),
    })
}

/// First-order bounds for one-dimensional single-channel convolution.
///
/// With linear summation and general entries the factor is `n_h + 2n + 4`.
pub fn bound_1d(ts: &TransformSet, h: &Tensor, x: &Tensor, consts: &SummationConstants, format: FloatFormat) -> Result<BoundReport> {
    report(ts, h, x, Dims::One, consts, format, None)
}

/// First-order bounds for two-dimensional single-channel convolution, with
/// factor `2 alpha + 2 beta + 2 gamma + 1`.
pub fn bound_2d(ts: &TransformSet, h: &Tensor, x: &Tensor, consts: &SummationConstants, format: FloatFormat) -> Result<BoundReport> {
    report(ts, h, x, Dims::Two, consts, format, None)
}

/// Bounds for `C`-channel convolution with the Hadamard products summed by
/// `channel_sum`. The factor gains `lambda(C)`; the normwise bound uses the
/// largest per-channel input norms times `C`.
pub fn bound_multichannel(
    ts: &TransformSet,
    h: &Tensor,
    x: &Tensor,
    channel_sum: ChannelSum,
    consts: &SummationConstants,
    format: FloatFormat,
) -> Result<BoundReport> {
    report(ts, h, x, h.dims(), consts, format, Some(channel_sum))
}

/// Componentwise bound of the modified algorithm, which treats the finite
/// points as an `(n-1)`-point algorithm and adds the contribution of the
/// point at infinity to the last output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModifiedBound {
    pub descriptor: String,
    pub epsilon: f64,
    pub alpha_sub: f64,
    pub beta_sub: f64,
    pub gamma: f64,
    /// Constant of the last row of `B^T`.
    pub beta_full: f64,
    /// Factor of outputs before the last.
    pub factor: f64,
    /// Factor of the last output.
    pub last_factor: f64,
    /// True when the simplified last-output factor was used (`n_h >= 3`).
    pub simplified: bool,
    pub componentwise_bounds: Vec<f64>,
}

fn sub_matrix(m: &Matrix<Rational>, rows: usize, cols: usize) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |i, j| m[(i, j)].clone())
}

fn row_constant(rows: &Matrix<Rational>, keys: &[usize], order: DotOrder, format: FloatFormat) -> f64 {
    let class = ElementClass::of_matrix(rows, format);
    let depth = (0..rows.rows())
        .map(|i| {
            let tree: EvalTree = match order {
                DotOrder::Linear => linear_order(rows.row(i)),
                DotOrder::Huffman => huffman_order_keyed(rows.row(i), keys),
            };
            tree.depth()
        })
        .max()
        .unwrap_or(0);
    match order {
        // The length-based constant, as for unmodified transforms.
        DotOrder::Linear => (rows.cols() + class.multiplication_term()) as f64 - 1.0,
        DotOrder::Huffman => (depth + class.multiplication_term()) as f64,
    }
}

/// Bound for a modified transform set (one point at infinity).
///
/// The last output uses `max{gamma + beta' + alpha' + 1, beta_n + 1} + 1`.
/// For `n_h >= 3` the first branch dominates and the simplified factor
/// `gamma + beta' + alpha' + 1` is used instead.
pub fn bound_modified_1d(
    ts: &TransformSet,
    h: &Tensor,
    x: &Tensor,
    order: DotOrder,
    format: FloatFormat,
) -> Result<ModifiedBound> {
    if !ts.modified() {
        return Err(Error::Mismatch(format!("{} has no point at infinity", ts.descriptor())));
    }
    parts(ts, h, x, Dims::One)?;
    if h.channels() != 1 {
        return Err(Error::Shape("single-channel bound given multi-channel tensors".into()));
    }
    let (n, n_h, n_o) = (ts.n(), ts.n_h(), ts.n_o());
    let m = n - 1;
    let a_sub = sub_matrix(ts.a_t(), n_o, m);
    let g_sub = sub_matrix(ts.g(), m, n_h);
    let b_sub = sub_matrix(ts.b_t(), m, m);
    let ranks = ts.point_ranks();
    let cols: Vec<usize> = (0..n).collect();

    let alpha_sub = row_constant(&a_sub, &ranks[..m], order, format);
    let beta_sub = row_constant(&b_sub, &cols[..m], order, format);
    let gamma = row_constant(&g_sub, &cols[..n_h], order, format);
    let last_b = Matrix::from_fn(1, n, |_, j| ts.b_t()[(n - 1, j)].clone());
    let beta_full = row_constant(&last_b, &cols, order, format);

    let factor = gamma + beta_sub + alpha_sub + 1.0;
    let simplified = n_h >= 3;
    let last_factor = if simplified { factor } else { factor.max(beta_full + 1.0) + 1.0 };

    let hv = abs_vec(h.channel(0));
    let xv = abs_vec(x.channel(0));
    let gh = abs_mul_vec(&to_f64(&g_sub), &hv);
    let bx = abs_mul_vec(&to_f64(&b_sub), &xv[..m]);
    let prod: Vec<f64> = gh.iter().zip(&bx).map(|(u, v)| u * v).collect();
    let base = abs_mul_vec(&to_f64(&a_sub), &prod);
    let extra = hv[n_h - 1] * abs_mul_vec(&to_f64(&last_b), &xv)[0];
    let eps = format.unit_roundoff();
    let componentwise_bounds = base
        .iter()
        .enumerate()
        .map(|(q, b)| if q + 1 < n_o { b * factor * eps } else { (b + extra) * last_factor * eps })
        .collect();
    Ok(ModifiedBound {
        descriptor: ts.descriptor(),
        epsilon: eps,
        alpha_sub,
        beta_sub,
        gamma,
        beta_full,
        factor,
        last_factor,
        simplified,
        componentwise_bounds,
    })
}
