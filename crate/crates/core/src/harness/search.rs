use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::data::{curated_points, Curated};
use super::measure::{compare_reports, measure_error, ErrorReport};
use crate::engine::ConvConfig;
use crate::error::{Error, Result};
use crate::exact::{format_points, parse_points, Point, Rational};
use crate::matrix::{build, Dims};

/// Rationals with numerator in `-4..=4` and denominator in `1..=4`, each
/// value once, in order of first appearance by denominator then numerator.
pub fn candidate_pool() -> Vec<Rational> {
    let mut seen = HashSet::new();
    let mut pool = Vec::new();
    for d in 1..=4 {
        for n in -4..=4 {
            let r = Rational::new(n, d).expect("nonzero denominator");
            if seen.insert(r.clone()) {
                pool.push(r);
            }
        }
    }
    pool
}

/// `-1/p`, with `0` and infinity paired.
fn partner(p: &Point) -> Point {
    match p {
        Point::Infinity => Point::Finite(Rational::zero()),
        Point::Finite(r) if r.is_zero() => Point::Infinity,
        Point::Finite(r) => Point::Finite(-&r.recip().expect("nonzero")),
    }
}

fn canonical(points: &[Point]) -> Vec<String> {
    let mut v: Vec<String> = points.iter().map(|p| format_points(std::slice::from_ref(p))).collect();
    v.sort();
    v
}

/// Best known point sets per size and dimensionality, and the sizes still
/// to be explored.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchState {
    best: BTreeMap<(u32, usize), Vec<Point>>,
    pool: Vec<Rational>,
    frontier: Vec<(Dims, usize)>,
}

impl SearchState {
    /// `{0, -1, 1, inf}` for both dimensionalities.
    pub fn seeded() -> Self {
        let p4 = parse_points("0,-1,1,inf").expect("valid");
        let mut s = SearchState { best: BTreeMap::new(), pool: candidate_pool(), frontier: Vec::new() };
        s.record(Dims::One, 4, p4.clone());
        s.record(Dims::Two, 4, p4);
        s
    }

    /// The bundled sets of `which` for sizes `4..=up_to`.
    pub fn from_curated(which: Curated, up_to: usize) -> Result<Self> {
        let mut s = SearchState::seeded();
        for n in 5..=up_to {
            for dims in [Dims::One, Dims::Two] {
                s.record(dims, n, curated_points(which, dims, n)?);
            }
        }
        Ok(s)
    }

    pub fn pool(&self) -> &[Rational] {
        &self.pool
    }

    pub fn frontier(&self) -> &[(Dims, usize)] {
        &self.frontier
    }

    pub fn best(&self, dims: Dims, n: usize) -> Option<&[Point]> {
        self.best.get(&(dims.count(), n)).map(Vec::as_slice)
    }

    pub fn record(&mut self, dims: Dims, n: usize, points: Vec<Point>) {
        self.best.insert((dims.count(), n), points);
        self.frontier.retain(|&(d, m)| !(d == dims && m <= n));
        self.frontier.push((dims, n + 1));
    }

    /// Distinct best sets of size `n` over both tracks, 1D first.
    pub fn bases(&self, n: usize) -> Vec<(Dims, Vec<Point>)> {
        let mut out: Vec<(Dims, Vec<Point>)> = Vec::new();
        for dims in [Dims::One, Dims::Two] {
            if let Some(p) = self.best(dims, n) {
                if !out.iter().any(|(_, q)| canonical(q) == canonical(p)) {
                    out.push((dims, p.to_vec()));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    Add { point: String },
    Swap { dropped: String, added: [String; 2] },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n_h: usize,
    pub config: ConvConfig,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { n_h: 3, config: ConvConfig::default(), trials: 5000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub points: String,
    /// Track the base set came from.
    pub base_dims: Dims,
    pub origin: Move,
    pub per_point_l1_mean: f64,
    /// Error relative to the first-ranked candidate, with bootstrap interval.
    pub ratio_to_best: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub tied_with_best: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: usize,
    pub dims: Dims,
    /// Ascending by error.
    pub candidates: Vec<Candidate>,
}

impl SearchResult {
    /// Candidates ranked first or statistically tied with it.
    pub fn leaders(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.tied_with_best)
    }

    pub fn best_points(&self) -> Result<Vec<Point>> {
        parse_points(&self.candidates[0].points)
    }
}

fn expansions(base: &[Point], n: usize, pool: &[Rational]) -> Vec<(Vec<Point>, Move)> {
    let has = |p: &Point| base.contains(p);
    let show = |p: &Point| format_points(std::slice::from_ref(p));
    let mut out = Vec::new();
    for r in pool {
        let p = Point::Finite(r.clone());
        if !has(&p) {
            let mut s = base.to_vec();
            s.push(p.clone());
            out.push((s, Move::Add { point: show(&p) }));
        }
    }
    if n % 2 == 0 {
        for dropped in base.iter().filter(|p| !has(&partner(p))) {
            for r in pool.iter().filter(|r| !r.is_zero()) {
                let (a, b) = (Point::Finite(r.clone()), partner(&Point::Finite(r.clone())));
                if has(&a) || has(&b) {
                    continue;
                }
                let mut s: Vec<Point> = base.iter().filter(|p| *p != dropped).cloned().collect();
                s.push(a.clone());
                s.push(b.clone());
                out.push((s, Move::Swap { dropped: show(dropped), added: [show(&a), show(&b)] }));
            }
        }
    }
    out
}

/// Grow the best `(n-1)`-point sets of both tracks by one point, or for even
/// `n` swap an unpaired point for a pair `{p, -1/p}`, and rank every
/// candidate by measured error in `dims`.
///
/// All candidates are measured on the same trials, so ties are decided by a
/// paired bootstrap of the error ratio against the leader.
pub fn search_points(n: usize, dims: Dims, base: &SearchState, cfg: &SearchConfig) -> Result<SearchResult> {
    if n < 5 {
        return Err(Error::Size(format!("search starts from the 4-point base; got n={n}")));
    }
    if n < cfg.n_h + 1 {
        return Err(Error::Size(format!("n={n} leaves no outputs for kernel size {}", cfg.n_h)));
    }
    let bases = base.bases(n - 1);
    if bases.is_empty() {
        return Err(Error::InsufficientData(format!("no base set with {} points", n - 1)));
    }
    let mut seen = HashSet::new();
    let mut measured: Vec<(Vec<Point>, Dims, Move, ErrorReport)> = Vec::new();
    for (base_dims, set) in bases {
        for (points, origin) in expansions(&set, n, base.pool()) {
            if !seen.insert(canonical(&points)) {
                continue;
            }
            let ts = build(cfg.n_h, n + 1 - cfg.n_h, &points)?;
            let report = measure_error(&ts, dims, cfg.config, cfg.trials, cfg.seed)?;
            measured.push((points, base_dims, origin, report));
        }
    }
    measured.sort_by(|a, b| a.3.per_point_l1_mean.total_cmp(&b.3.per_point_l1_mean));
    let leader = measured[0].3.clone();
    let candidates = measured
        .into_iter()
        .map(|(points, base_dims, origin, report)| {
            let c = compare_reports(&report, &leader)?;
            Ok(Candidate {
                points: format_points(&points),
                base_dims,
                origin,
                per_point_l1_mean: report.per_point_l1_mean,
                ratio_to_best: c.ratio,
                ci_low: c.ci_low,
                ci_high: c.ci_high,
                tied_with_best: c.is_tie(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchResult { n, dims, candidates })
}
