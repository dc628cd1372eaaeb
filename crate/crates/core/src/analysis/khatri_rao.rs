use std::ops::Mul;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Row-wise Khatri-Rao product: row `i` is the Kronecker product of row `i`
/// of `b_t` with row `i` of `g`, giving an `n x (n * n_h)` matrix.
pub fn khatri_rao_rowwise<T>(b_t: &Matrix<T>, g: &Matrix<T>) -> Result<Matrix<T>>
where
    T: Clone,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    if b_t.rows() != g.rows() {
        return Err(Error::Shape(format!(
            "row counts differ: {} and {}",
            b_t.rows(),
            g.rows()
        )));
    }
    let k = g.cols();
    Ok(Matrix::from_fn(b_t.rows(), b_t.cols() * k, |i, j| &b_t[(i, j / k)] * &g[(i, j % k)]))
}

/// Kronecker product of two vectors, `x` major.
pub fn kron<T>(x: &[T], h: &[T]) -> Vec<T>
where
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    x.iter().flat_map(|a| h.iter().map(move |b| a * b)).collect()
}
