use std::collections::HashSet;

use super::{Matrix, RoundedTriple};
use crate::engine::TransformTrees;
use crate::error::{Error, Result};
use crate::exact::{from_roots, FloatFormat, Point, Rational};

/// The `(A^T, G, B^T)` triple for one convolution size and point set.
///
/// Immutable after construction. `A^T` is `n_o x n`, `G` is `n x n_h` and
/// `B^T` is `n x n`, with `n = n_h + n_o - 1`. The computed operation is the
/// valid-region correlation `s_k = sum_j h_j x_{k+j}`.
#[derive(Clone, Debug)]
pub struct TransformSet {
    n_h: usize,
    n_o: usize,
    points: Vec<Point>,
    modified: bool,
    a_t: Matrix<Rational>,
    g: Matrix<Rational>,
    b_t: Matrix<Rational>,
    fp32: RoundedTriple,
    fp64: RoundedTriple,
    trees: TransformTrees,
}

impl TransformSet {
    pub fn n_h(&self) -> usize {
        self.n_h
    }

    pub fn n_o(&self) -> usize {
        self.n_o
    }

    /// Number of points, which is also the number of general multiplications in 1D.
    pub fn n(&self) -> usize {
        self.n_h + self.n_o - 1
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn modified(&self) -> bool {
        self.modified
    }

    pub fn a_t(&self) -> &Matrix<Rational> {
        &self.a_t
    }

    pub fn g(&self) -> &Matrix<Rational> {
        &self.g
    }

    pub fn b_t(&self) -> &Matrix<Rational> {
        &self.b_t
    }

    pub fn rounded(&self, format: FloatFormat) -> &RoundedTriple {
        match format {
            FloatFormat::Fp32 => &self.fp32,
            FloatFormat::Fp64 => &self.fp64,
        }
    }

    /// Huffman evaluation trees for every row, fixed at construction.
    pub fn trees(&self) -> &TransformTrees {
        &self.trees
    }

    /// Rank of each point under the canonical order (finite ascending, infinity last).
    ///
    /// Used as the tie-break key for `A^T` rows so that evaluation order does
    /// not depend on the order the points were supplied in.
    pub fn point_ranks(&self) -> Vec<usize> {
        point_ranks(&self.points)
    }

    /// The square `n x n` output transform before trimming to `n_o` rows.
    pub fn full_output_transform(&self) -> Matrix<Rational> {
        let n = self.n();
        Matrix::from_fn(n, n, |i, j| match &self.points[j] {
            Point::Finite(p) => p.pow(i as u32),
            Point::Infinity => {
                if i == n - 1 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
        })
    }

    /// The square `n x n` kernel transform, i.e. `G` before its trailing columns were dropped.
    pub fn full_kernel_transform(&self) -> Matrix<Rational> {
        let n = self.n();
        if self.modified {
            let finite: Vec<Rational> = self.points[..n - 1].iter().filter_map(Point::finite).cloned().collect();
            let scales = interpolation_scales(&finite);
            Matrix::from_fn(n, n, |i, j| {
                if i == n - 1 {
                    if j == n - 1 { Rational::one() } else { Rational::zero() }
                } else {
                    &finite[i].pow(j as u32) * &scales[i]
                }
            })
        } else {
            let finite: Vec<Rational> = self.points.iter().filter_map(Point::finite).cloned().collect();
            let scales = interpolation_scales(&finite);
            Matrix::from_fn(n, n, |i, j| &finite[i].pow(j as u32) * &scales[i])
        }
    }

    /// Short label such as `"F(2,3) {0,-1,1,inf}"`.
    pub fn descriptor(&self) -> String {
        format!(
            "F({},{}) {{{}}}",
            self.n_o,
            self.n_h,
            crate::exact::format_points(&self.points)
        )
    }

    pub(crate) fn from_parts(
        n_h: usize,
        n_o: usize,
        points: Vec<Point>,
        a_t: Matrix<Rational>,
        g: Matrix<Rational>,
        b_t: Matrix<Rational>,
    ) -> Result<Self> {
        let modified = points.iter().any(Point::is_infinity);
        let fp32 = RoundedTriple::round(&a_t, &g, &b_t, FloatFormat::Fp32)?;
        let fp64 = RoundedTriple::round(&a_t, &g, &b_t, FloatFormat::Fp64)?;
        let trees = TransformTrees::build(&a_t, &g, &b_t, &point_ranks(&points));
        Ok(TransformSet { n_h, n_o, points, modified, a_t, g, b_t, fp32, fp64, trees })
    }
}

fn point_ranks(points: &[Point]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| match (&points[a], &points[b]) {
        (Point::Finite(x), Point::Finite(y)) => x.cmp(y),
        (Point::Finite(_), Point::Infinity) => std::cmp::Ordering::Less,
        (Point::Infinity, Point::Finite(_)) => std::cmp::Ordering::Greater,
        (Point::Infinity, Point::Infinity) => std::cmp::Ordering::Equal,
    });
    let mut ranks = vec![0; points.len()];
    for (rank, idx) in order.into_iter().enumerate() {
        ranks[idx] = rank;
    }
    ranks
}

fn check_sizes(n_h: usize, n_o: usize, count: usize) -> Result<()> {
    if n_h == 0 || n_o == 0 {
        return Err(Error::Size(format!("n_h={n_h} and n_o={n_o} must both be at least 1")));
    }
    let n = n_h + n_o - 1;
    if count != n {
        return Err(Error::Size(format!(
            "n_h={n_h}, n_o={n_o} needs {n} points, got {count}"
        )));
    }
    Ok(())
}

fn check_distinct(points: &[Point]) -> Result<()> {
    let mut seen = HashSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(p.to_string()));
        }
    }
    Ok(())
}

/// `N_i = 1 / prod_{j != i} (p_i - p_j)`.
fn interpolation_scales(points: &[Rational]) -> Vec<Rational> {
    points
        .iter()
        .enumerate()
        .map(|(i, pi)| {
            let denom = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Rational::one(), |acc, (_, pj)| &acc * &(pi - pj));
            denom.recip().expect("distinct points give a nonzero product")
        })
        .collect()
}

/// Unmodified construction over `m` finite points: `A^T` is `n_o x m`,
/// `G` is `m x n_h`, `B^T` is `m x m`.
fn toom_cook_core(
    n_h: usize,
    n_o: usize,
    points: &[Rational],
) -> (Matrix<Rational>, Matrix<Rational>, Matrix<Rational>) {
    let m = points.len();
    let scales = interpolation_scales(points);
    let a_t = Matrix::from_fn(n_o, m, |i, j| points[j].pow(i as u32));
    let g = Matrix::from_fn(m, n_h, |i, j| &points[i].pow(j as u32) * &scales[i]);
    // Row i of B^T holds the coefficients of M_i(a) = prod_{k != i} (a - p_k).
    let mut b_t = Matrix::filled(m, m, Rational::zero());
    for i in 0..m {
        let others = points.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, p)| p);
        let poly = from_roots(others);
        for j in 0..m {
            b_t[(i, j)] = poly.coeff(j);
        }
    }
    (a_t, g, b_t)
}

/// Toom-Cook construction from `n` distinct finite points.
pub fn build_toom_cook(n_h: usize, n_o: usize, points: &[Point]) -> Result<TransformSet> {
    check_sizes(n_h, n_o, points.len())?;
    if points.iter().any(Point::is_infinity) {
        return Err(Error::Infinity(
            "unmodified construction needs finite points; use build_modified".into(),
        ));
    }
    check_distinct(points)?;
    let finite: Vec<Rational> = points.iter().filter_map(Point::finite).cloned().collect();
    let (a_t, g, b_t) = toom_cook_core(n_h, n_o, &finite);
    TransformSet::from_parts(n_h, n_o, points.to_vec(), a_t, g, b_t)
}

/// Modified construction: `n - 1` finite points plus the infinity pseudo-point.
///
/// The `(n-1)`-point matrices are embedded in the top-left; `G` gains the row
/// `(0 .. 0 1)`, `A^T` the column `(0 .. 0 1)^T`, and `B^T` the column
/// `(0 .. 0 1)^T` plus a last row holding the coefficients of
/// `M'(a) = prod (a - p_k)` over the finite points.
pub fn build_modified(n_h: usize, n_o: usize, points: &[Point]) -> Result<TransformSet> {
    check_sizes(n_h, n_o, points.len())?;
    let infinities = points.iter().filter(|p| p.is_infinity()).count();
    if infinities != 1 {
        return Err(Error::Infinity(format!(
            "modified construction needs exactly one infinity, got {infinities}"
        )));
    }
    check_distinct(points)?;
    let mut ordered: Vec<Point> = points.iter().filter(|p| !p.is_infinity()).cloned().collect();
    ordered.push(Point::Infinity);
    let n = ordered.len();
    let finite: Vec<Rational> = ordered[..n - 1].iter().filter_map(Point::finite).cloned().collect();
    let (a_small, g_small, b_small) = toom_cook_core(n_h, n_o, &finite);

    let a_t = Matrix::from_fn(n_o, n, |i, j| {
        if j < n - 1 {
            a_small[(i, j)].clone()
        } else if i == n_o - 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let g = Matrix::from_fn(n, n_h, |i, j| {
        if i < n - 1 {
            g_small[(i, j)].clone()
        } else if j == n_h - 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let m_prime = from_roots(finite.iter());
    let b_t = Matrix::from_fn(n, n, |i, j| {
        if i == n - 1 {
            m_prime.coeff(j)
        } else if j < n - 1 {
            b_small[(i, j)].clone()
        } else {
            Rational::zero()
        }
    });
    TransformSet::from_parts(n_h, n_o, ordered, a_t, g, b_t)
}

/// Dispatch on the presence of the infinity pseudo-point.
pub fn build(n_h: usize, n_o: usize, points: &[Point]) -> Result<TransformSet> {
    if points.iter().any(Point::is_infinity) {
        build_modified(n_h, n_o, points)
    } else {
        build_toom_cook(n_h, n_o, points)
    }
}

/// Chebyshev nodes `cos((2k-1)pi/(2n))`, `k = 1..n`, rounded to `f64` and held exactly.
///
/// The positive half is evaluated with `cos` directly and mirrored, so the
/// set is exactly symmetric and the middle node of an odd set is exactly zero
/// (rather than `cos(pi/2) ~ 6e-17`).
pub fn chebyshev_points(n: usize) -> Vec<Point> {
    assert!(n >= 1, "chebyshev_points needs n >= 1");
    let half: Vec<f64> = (1..=n / 2)
        .map(|k| ((2 * k - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect();
    let mut nodes = half.clone();
    if n % 2 == 1 {
        nodes.push(0.0);
    }
    nodes.extend(half.iter().rev().map(|v| -v));
    nodes
        .into_iter()
        .map(|v| Point::Finite(Rational::from_f64(v).expect("finite node")))
        .collect()
}
