use serde::{Deserialize, Serialize};

use super::data::{curated_points, Curated};
use super::measure::{compare_reports, measure_error, Comparison};
use super::search::candidate_pool;
use crate::engine::ConvConfig;
use crate::error::{Error, Result};
use crate::exact::{format_points, Point};
use crate::matrix::{build, chebyshev_points, Dims};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevRow {
    pub n: usize,
    pub dims: Dims,
    pub curated: f64,
    pub chebyshev: f64,
    /// `chebyshev / curated`.
    pub ratio: f64,
}

/// Chebyshev nodes against the bundled fp32 sets, kernel size 3.
pub fn compare_chebyshev(
    ns: impl IntoIterator<Item = usize>,
    dims: Dims,
    cfg: ConvConfig,
    trials: usize,
    seed: u64,
) -> Result<Vec<ChebyshevRow>> {
    ns.into_iter()
        .map(|n| {
            if n < 4 {
                return Err(Error::Size(format!("Chebyshev comparison needs n >= 4, got {n}")));
            }
            let ours = build(3, n - 2, &curated_points(Curated::Fp32, dims, n)?)?;
            let cheb = build(3, n - 2, &chebyshev_points(n))?;
            let a = measure_error(&ours, dims, cfg, trials, seed)?.per_point_l1_mean;
            let b = measure_error(&cheb, dims, cfg, trials, seed)?.per_point_l1_mean;
            Ok(ChebyshevRow { n, dims, curated: a, chebyshev: b, ratio: b / a })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: usize,
    pub error_1d: f64,
    pub error_2d: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthStats {
    /// Sizes from the second point on.
    pub ns: Vec<usize>,
    /// `ln e(n) - ln e(n-1)`.
    pub delta_log_1d: Vec<f64>,
    pub delta_log_2d: Vec<f64>,
    /// `c` in `y = x^2 / c`, with `x` and `y` the 1D and 2D errors relative
    /// to direct convolution, fitted in log space.
    pub fit_c: f64,
    /// Standard deviation of `ln c` over the sizes.
    pub fit_log_sd: f64,
}

impl GrowthStats {
    pub fn monotone(&self) -> bool {
        self.delta_log_1d.iter().chain(&self.delta_log_2d).all(|&d| d > 0.0)
    }
}

/// Error growth over consecutive sizes and the quadratic 2D-vs-1D fit.
///
/// The fit takes `x = e1(n) / d1` and `y = e2(n) / d2`, where `d1` and `d2`
/// are the direct-convolution errors, and averages `2 ln x - ln y`.
pub fn growth_analysis(points: &[GrowthPoint], direct_1d: f64, direct_2d: f64) -> Result<GrowthStats> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!("growth needs at least 3 sizes, got {}", points.len())));
    }
    if points.windows(2).any(|w| w[1].n != w[0].n + 1) {
        return Err(Error::InsufficientData("growth needs consecutive sizes".into()));
    }
    let dl = |f: fn(&GrowthPoint) -> f64| points.windows(2).map(|w| f(&w[1]).ln() - f(&w[0]).ln()).collect();
    let logs: Vec<f64> = points
        .iter()
        .map(|p| 2.0 * (p.error_1d / direct_1d).ln() - (p.error_2d / direct_2d).ln())
        .collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    let var = logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / logs.len() as f64;
    Ok(GrowthStats {
        ns: points[1..].iter().map(|p| p.n).collect(),
        delta_log_1d: dl(|p| p.error_1d),
        delta_log_2d: dl(|p| p.error_2d),
        fit_c: mean.exp(),
        fit_log_sd: var.sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModifiedComparison {
    pub n: usize,
    pub dims: Dims,
    pub unmodified: String,
    /// `unmodified` with its worst finite point replaced by infinity.
    pub modified: String,
    /// The replaced point.
    pub replaced: String,
    /// Modified over unmodified.
    pub comparison: Comparison,
}

impl ModifiedComparison {
    /// `1 - modified / unmodified`.
    pub fn reduction(&self) -> f64 {
        1.0 - self.comparison.ratio
    }
}

fn screen_seed(seed: u64) -> u64 {
    seed ^ 0x5c4e_e11
}

fn best_of(sets: Vec<Vec<Point>>, n_h: usize, dims: Dims, cfg: ConvConfig, trials: usize, seed: u64) -> Result<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (k, s) in sets.iter().enumerate() {
        let ts = build(n_h, s.len() + 1 - n_h, s)?;
        let e = measure_error(&ts, dims, cfg, trials, seed)?.per_point_l1_mean;
        if best.map_or(true, |(b, _)| e < b) {
            best = Some((e, k));
        }
    }
    best.map(|b| b.1).ok_or_else(|| Error::InsufficientData("no candidate sets".into()))
}

/// The best unmodified set obtained from `points` by replacing infinity with
/// a pool point, screened on `screen_trials`.
pub fn strongest_unmodified(
    points: &[Point],
    n_h: usize,
    dims: Dims,
    cfg: ConvConfig,
    screen_trials: usize,
    seed: u64,
) -> Result<Vec<Point>> {
    if !points.contains(&Point::Infinity) {
        return Err(Error::Mismatch("set has no point at infinity".into()));
    }
    let finite: Vec<Point> = points.iter().filter(|p| !p.is_infinity()).cloned().collect();
    let sets: Vec<Vec<Point>> = candidate_pool()
        .into_iter()
        .map(Point::Finite)
        .filter(|p| !finite.contains(p))
        .map(|p| finite.iter().cloned().chain([p]).collect())
        .collect();
    let k = best_of(sets.clone(), n_h, dims, cfg, screen_trials, screen_seed(seed))?;
    Ok(sets[k].clone())
}

/// Modified against unmodified Toom-Cook for a set of finite points.
///
/// Every finite point is tried in turn as the one replaced by infinity,
/// screened on `screen_trials` with a seed of its own; the best replacement
/// is then compared with the unmodified set on `trials` trials of `seed`.
pub fn modified_vs_unmodified(
    unmodified: &[Point],
    n_h: usize,
    dims: Dims,
    cfg: ConvConfig,
    screen_trials: usize,
    trials: usize,
    seed: u64,
) -> Result<ModifiedComparison> {
    if unmodified.contains(&Point::Infinity) {
        return Err(Error::Infinity("the unmodified set must be finite".into()));
    }
    let sets: Vec<Vec<Point>> = (0..unmodified.len())
        .map(|k| {
            let mut s = unmodified.to_vec();
            s[k] = Point::Infinity;
            s
        })
        .collect();
    let k = best_of(sets.clone(), n_h, dims, cfg, screen_trials, screen_seed(seed))?;
    let modified = &sets[k];
    let n_o = unmodified.len() + 1 - n_h;
    let a = measure_error(&build(n_h, n_o, modified)?, dims, cfg, trials, seed)?;
    let b = measure_error(&build(n_h, n_o, unmodified)?, dims, cfg, trials, seed)?;
    Ok(ModifiedComparison {
        n: unmodified.len(),
        dims,
        unmodified: format_points(unmodified),
        modified: format_points(modified),
        replaced: unmodified[k].to_string(),
        comparison: compare_reports(&a, &b)?,
    })
}
