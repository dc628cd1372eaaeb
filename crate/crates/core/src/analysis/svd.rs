use serde::{Deserialize, Serialize};

use super::khatri_rao::khatri_rao_rowwise;
use super::norms::{norm1, to_f64};
use crate::engine::Tensor;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, TransformSet};

const TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Singular values of `m`, descending, by one-sided Jacobi rotations.
///
/// Works on the orientation with fewer columns, so `min(rows, cols)` values
/// are returned. Sweeps stop once every column pair is orthogonal to the
/// relative tolerance `1e-12`.
pub fn singular_values(m: &Matrix<f64>) -> Result<Vec<f64>> {
    let work = if m.cols() > m.rows() { m.transpose() } else { m.clone() };
    let (rows, k) = (work.rows(), work.cols());
    // Column-major copy.
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| (0..rows).map(|i| work[(i, j)]).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= TOLERANCE * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                for (a, b) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (u, v) = (*a, *b);
                    *a = c * u - s * v;
                    *b = s * u + c * v;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!("Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")));
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// `sigma_max / sigma_min`, or `None` when the smallest singular value is
/// negligible relative to the largest.
pub fn condition_number(m: &Matrix<f64>) -> Result<Option<f64>> {
    let sv = singular_values(m)?;
    let (max, min) = (sv[0], *sv.last().expect("nonempty matrix"));
    let negligible = max * f64::EPSILON * m.rows().max(m.cols()) as f64;
    Ok(if min <= negligible { None } else { Some(max / min) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub descriptor: String,
    /// `kappa_2(A^T (B^T kr G))`; infinite when numerically singular.
    pub kappa: f64,
    pub bound: f64,
    pub diagnostic: Option<String>,
}

/// `A^T (B^T kr G)` with the full square `A^T`, as an `n x (n * n_h)` matrix.
pub fn conditioning_matrix(ts: &TransformSet) -> Matrix<f64> {
    let kr = khatri_rao_rowwise(ts.b_t(), ts.g()).expect("transform row counts agree");
    to_f64(&ts.full_output_transform().matmul(&kr))
}

/// Conditioning estimate `sqrt(n_o n n_h) max{||x||_1, ||h||_1} kappa_2(A^T (B^T kr G))`.
pub fn condition_bound(ts: &TransformSet, h: &Tensor, x: &Tensor) -> Result<ConditionReport> {
    if h.data().len() != ts.n_h() || x.data().len() != ts.n() {
        return Err(Error::Shape(format!("inputs do not match {}", ts.descriptor())));
    }
    let m = conditioning_matrix(ts);
    let scale = ((ts.n_o() * ts.n() * ts.n_h()) as f64).sqrt() * norm1(x.data()).max(norm1(h.data()));
    Ok(match condition_number(&m)? {
        Some(kappa) => ConditionReport { descriptor: ts.descriptor(), kappa, bound: scale * kappa, diagnostic: None },
        None => ConditionReport {
            descriptor: ts.descriptor(),
            kappa: f64::INFINITY,
            bound: f64::INFINITY,
            diagnostic: Some("matrix is numerically singular".into()),
        },
    })
}
