//! The Toom-Cook pipeline and direct correlation in exact rational arithmetic.

use crate::exact::Rational;
use crate::matrix::{Matrix, TransformSet};

/// `A^T (G h ⊙ B^T x)`.
pub fn conv_1d_exact(ts: &TransformSet, h: &[Rational], x: &[Rational]) -> Vec<Rational> {
    let gh = ts.g().mul_vec(h);
    let bx = ts.b_t().mul_vec(x);
    let m: Vec<Rational> = gh.iter().zip(&bx).map(|(a, b)| a * b).collect();
    ts.a_t().mul_vec(&m)
}

/// `A^T (G H G^T ⊙ B^T X B) A` with `h` (`n_h x n_h`) and `x` (`n x n`) row-major.
pub fn conv_2d_exact(ts: &TransformSet, h: &[Rational], x: &[Rational]) -> Vec<Rational> {
    let hm = Matrix::from_rows(h.chunks(ts.n_h()).map(<[Rational]>::to_vec).collect());
    let xm = Matrix::from_rows(x.chunks(ts.n()).map(<[Rational]>::to_vec).collect());
    let u = ts.g().matmul(&hm).matmul(&ts.g().transpose());
    let v = ts.b_t().matmul(&xm).matmul(&ts.b_t().transpose());
    let m = Matrix::from_fn(ts.n(), ts.n(), |i, j| &u[(i, j)] * &v[(i, j)]);
    ts.a_t().matmul(&m).matmul(&ts.a_t().transpose()).as_slice().to_vec()
}

/// `s_k = sum_j h_j x_{k+j}`.
pub fn direct_1d_exact(h: &[Rational], x: &[Rational]) -> Vec<Rational> {
    let n_o = x.len() + 1 - h.len();
    (0..n_o).map(|k| h.iter().enumerate().map(|(j, hj)| hj * &x[k + j]).sum()).collect()
}

/// 2D valid correlation of an `n_h x n_h` kernel over an `n x n` input, row-major.
pub fn direct_2d_exact(n_h: usize, n: usize, h: &[Rational], x: &[Rational]) -> Vec<Rational> {
    let n_o = n + 1 - n_h;
    let mut out = Vec::with_capacity(n_o * n_o);
    for i in 0..n_o {
        for j in 0..n_o {
            let mut acc = Rational::zero();
            for a in 0..n_h {
                for b in 0..n_h {
                    acc = acc + &h[a * n_h + b] * &x[(i + a) * n + j + b];
                }
            }
            out.push(acc);
        }
    }
    out
}
