use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixNorms {
    /// Maximum absolute column sum.
    pub one_norm: f64,
    pub frobenius: f64,
}

pub fn matrix_norms(m: &Matrix<f64>) -> MatrixNorms {
    let one_norm = (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let frobenius = m.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
    MatrixNorms { one_norm, frobenius }
}

/// Maximum absolute row sum, i.e. the 1-norm of the transpose.
pub fn inf_norm(m: &Matrix<f64>) -> f64 {
    (0..m.rows()).map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Entries of an exact matrix as `f64` (nearest).
pub(crate) fn to_f64(m: &Matrix<Rational>) -> Matrix<f64> {
    m.to_f64().expect("transform entries fit in f64")
}

/// `|M| v` for nonnegative `v`.
pub(crate) fn abs_mul_vec(m: &Matrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.rows()).map(|i| m.row(i).iter().zip(v).map(|(a, b)| a.abs() * b).sum()).collect()
}
