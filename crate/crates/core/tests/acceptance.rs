//! Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion followed
//! by the numbers behind it. A FAIL is reported, not raised: the binary only
//! exits non-zero when a criterion cannot be evaluated at all.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toomcook::analysis::{
    bound_1d, bound_2d, bound_multichannel, error_norm, SummationConstants,
};
use toomcook::engine::exact::{conv_1d_exact, conv_2d_exact, direct_1d_exact, direct_2d_exact};
use toomcook::engine::{conv, conv_direct_with, ChannelSum, ConvConfig, DotOrder, Precision, Tensor};
use toomcook::exact::{parse_points, FloatFormat, Point, Rational};
use toomcook::harness::{
    channel_rows, chebyshev_rows, combined_rows, curated_points, growth_analysis, measure_error,
    modified_vs_unmodified, running_error_study, search_points, strongest_unmodified, table1_rows, table2_rows,
    table3_rows, trial_inputs, two_decimals, Curated, Experiment, GrowthPoint, SearchConfig, SearchState,
    TableOptions, CURATED_SIZES,
};
use toomcook::matrix::{build, Dims, TransformSet};
use toomcook::Result;

// ---- pinned settings and tolerances ----

const TRIALS: usize = 5000;
const SEED: u64 = 0;
const EXACT_PAIRS: usize = 200;
const TABLE2_FACTOR: f64 = 3.0;
const MODIFIED_MIN_REDUCTION: f64 = 0.10;
const MODIFIED_SCREEN_TRIALS: usize = 500;
const HUFFMAN_MIN_REDUCTION: f64 = 0.05;
const MIXED_MAX_RATIO: f64 = 0.85;
const MIXED_TOLERANCE: f64 = 0.15;
const CHANNEL_TOLERANCE: f64 = 0.15;
const CHEBYSHEV_1D_MIN: f64 = 2.0;
const CHEBYSHEV_2D_MIN: f64 = 10.0;
const GROWTH_C: (f64, f64) = (1.5, 6.0);
const RUNNING_MIN_COVERAGE: f64 = 0.99;
const RUNNING_RATIO: (f64, f64) = (2.0, 10.0);

// ---- reference values ----

/// Rows of points 0, 4..=16: (outputs, mults/output) for k=3, 3x3, 5, 5x5;
/// "-" where the kernel needs more points.
const REF_TABLE1: [[(&str, &str); 4]; 14] = [
    [("1", "3"), ("1x1", "9"), ("1", "5"), ("1x1", "25")],
    [("2", "2"), ("2x2", "4"), ("-", "-"), ("-", "-")],
    [("3", "1.67"), ("3x3", "2.78"), ("-", "-"), ("-", "-")],
    [("4", "1.5"), ("4x4", "2.25"), ("2", "3"), ("2x2", "9")],
    [("5", "1.4"), ("5x5", "1.96"), ("3", "2.33"), ("3x3", "5.44")],
    [("6", "1.34"), ("6x6", "1.78"), ("4", "2"), ("4x4", "4")],
    [("7", "1.29"), ("7x7", "1.65"), ("5", "1.8"), ("5x5", "3.24")],
    [("8", "1.25"), ("8x8", "1.56"), ("6", "1.67"), ("6x6", "2.78")],
    [("9", "1.22"), ("9x9", "1.49"), ("7", "1.57"), ("7x7", "2.47")],
    [("10", "1.2"), ("10x10", "1.44"), ("8", "1.5"), ("8x8", "2.25")],
    [("11", "1.18"), ("11x11", "1.4"), ("9", "1.44"), ("9x9", "2.09")],
    [("12", "1.17"), ("12x12", "1.36"), ("10", "1.4"), ("10x10", "1.96")],
    [("13", "1.15"), ("13x13", "1.33"), ("11", "1.36"), ("11x11", "1.86")],
    [("14", "1.14"), ("14x14", "1.31"), ("12", "1.33"), ("12x12", "1.78")],
];

/// The one cell whose printed rounding disagrees with its own row: 8 points,
/// kernel 3, 6 outputs, 8/6 = 1.333...
const TABLE1_MISPRINT: (usize, usize, &str) = (8, 0, "1.34");

/// Per-point fp32 errors for n = 0 (direct), 4..=18: (1D, 2D).
const REF_TABLE2: [(f64, f64); 16] = [
    (1.75e-8, 4.63e-8),
    (2.45e-8, 7.65e-8),
    (5.19e-8, 2.35e-7),
    (6.92e-8, 3.29e-7),
    (9.35e-8, 6.81e-7),
    (1.15e-7, 8.79e-7),
    (2.34e-7, 3.71e-6),
    (3.46e-7, 7.35e-6),
    (5.91e-7, 2.2e-5),
    (7.51e-7, 3.22e-5),
    (1.32e-6, 1.09e-4),
    (1.84e-6, 1.99e-4),
    (3.42e-6, 5.54e-4),
    (4.26e-6, 8.8e-4),
    (1.35e-5, 1.07e-2),
    (2.24e-5, 1.93e-2),
];

/// Mixed over fp32 ratios for n = 4..=18: (1D, 2D).
const REF_TABLE3_RATIO: [(f64, f64); 15] = [
    (0.76, 0.69),
    (0.71, 0.69),
    (0.64, 0.65),
    (0.65, 0.54),
    (0.61, 0.59),
    (0.66, 0.65),
    (0.6, 0.6),
    (0.62, 0.58),
    (0.6, 0.59),
    (0.63, 0.59),
    (0.6, 0.57),
    (0.63, 0.56),
    (0.65, 0.56),
    (0.62, 0.55),
    (0.62, 0.54),
];

/// Pairwise over linear, in percent, for 32 and 64 channels, n_o = 1..=7.
const REF_TABLE4: [[f64; 2]; 7] = [[69., 56.], [71., 57.], [72., 59.], [74., 62.], [77., 62.], [75., 63.], [74., 61.]];
const REF_TABLE5: [[f64; 2]; 7] = [[75., 62.], [71., 58.], [73., 58.], [75., 61.], [73., 61.], [75., 61.], [73., 61.]];
/// Mixed pairwise over fp32 linear, percent: 1D (32, 64) then 2D (32, 64).
const REF_TABLE8: [[f64; 4]; 7] = [
    [69., 56., 75., 62.],
    [61., 51., 61., 51.],
    [62., 53., 63., 52.],
    [62., 53., 66., 55.],
    [65., 53., 52., 44.],
    [60., 51., 59., 50.],
    [62., 53., 62., 52.],
];

/// Chebyshev over curated error ratios, n = 4..=18: (1D, 2D).
const REF_CHEBYSHEV: [(f64, f64); 15] = [
    (1.41, 1.32),
    (1.06, 8.62),
    (1.42, 1.62),
    (1.68, 2.39),
    (3.07, 7.06),
    (2.61, 6.36),
    (3.82, 13.2),
    (4.80, 19.1),
    (8.86, 59.4),
    (9.81, 80.6),
    (15.29, 203.),
    (18.21, 364.),
    (30.83, 1060.),
    (21.01, 415.),
    (34.03, 11200.),
];

const REF_GROWTH_C: f64 = 2.97;
const REF_RUNNING_RATIO: (f64, f64) = (4.63, 7.51);

// ---- reporting ----

struct Verdict {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Verdict { pass, summary: summary.into(), details: Vec::new() }
    }

    fn detail(mut self, lines: impl IntoIterator<Item = String>) -> Self {
        self.details.extend(lines);
        self
    }
}

fn dims_list() -> [Dims; 2] {
    [Dims::One, Dims::Two]
}

fn dname(d: Dims) -> &'static str {
    match d {
        Dims::One => "1D",
        Dims::Two => "2D",
    }
}

fn cfg() -> ConvConfig {
    ConvConfig::default()
}

fn opts() -> TableOptions {
    TableOptions { trials: TRIALS, seed: SEED }
}

fn canonical(points: &[Point]) -> BTreeSet<String> {
    points.iter().map(|p| p.to_string()).collect()
}

// ---- 1: exactness ----

fn random_rationals(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| Rational::new(rng.gen_range(-50..=50), rng.gen_range(1..=16)).unwrap()).collect()
}

fn criterion_exactness() -> Result<Verdict> {
    let mut sets: Vec<(Dims, Vec<Point>)> = Vec::new();
    let mut seen = BTreeSet::new();
    for which in [Curated::Fp32, Curated::Mixed] {
        for n in CURATED_SIZES {
            for dims in dims_list() {
                let p = curated_points(which, dims, n)?;
                let key: Vec<String> = canonical(&p).into_iter().collect();
                if seen.insert(key) {
                    sets.push((dims, p));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = Vec::new();
    for (_, points) in &sets {
        let ts = build(3, points.len() - 2, points)?;
        for dims in dims_list() {
            for _ in 0..EXACT_PAIRS {
                let (ok, what) = match dims {
                    Dims::One => {
                        let h = random_rationals(&mut rng, 3);
                        let x = random_rationals(&mut rng, ts.n());
                        (conv_1d_exact(&ts, &h, &x) == direct_1d_exact(&h, &x), "1D")
                    }
                    Dims::Two => {
                        let h = random_rationals(&mut rng, 9);
                        let x = random_rationals(&mut rng, ts.n() * ts.n());
                        (conv_2d_exact(&ts, &h, &x) == direct_2d_exact(3, ts.n(), &h, &x), "2D")
                    }
                };
                if !ok {
                    mismatches.push(format!("{what} {}", ts.descriptor()));
                }
            }
        }
    }
    let checks = sets.len() * 2 * EXACT_PAIRS;
    Ok(Verdict::new(
        mismatches.is_empty(),
        format!("{} distinct sets x 2 dims x {EXACT_PAIRS} pairs = {checks} exact checks, {} mismatches", sets.len(), mismatches.len()),
    )
    .detail(mismatches.into_iter().take(5)))
}

// ---- 2: Table 1 ----

fn criterion_table1() -> Verdict {
    let rows = table1_rows();
    let mut mismatches = Vec::new();
    let mut misprint_seen = false;
    let mut cells = 0;
    for (row, reference) in rows.iter().zip(REF_TABLE1) {
        for (j, (cell, (outs, mults))) in row.cells.iter().zip(reference).enumerate() {
            cells += 1;
            let (got_outs, got_mults) = match cell {
                Some(c) if j % 2 == 1 => (format!("{0}x{0}", c.n_o), two_decimals(&c.mults_per_output)),
                Some(c) => (c.n_o.to_string(), two_decimals(&c.mults_per_output)),
                None => ("-".into(), "-".into()),
            };
            if got_outs == outs && got_mults == mults {
                continue;
            }
            if (row.points, j, mults) == TABLE1_MISPRINT {
                let exact = cell.as_ref().map(|c| c.mults_per_output.to_string()).unwrap_or_default();
                misprint_seen = got_outs == outs && exact == "4/3";
                continue;
            }
            mismatches.push(format!("points {} col {j}: got ({got_outs}, {got_mults}) want ({outs}, {mults})", row.points));
        }
    }
    let pass = mismatches.is_empty() && misprint_seen && rows.len() == REF_TABLE1.len();
    Verdict::new(
        pass,
        format!(
            "{cells} cells, {} mismatches; the printed 1.34 at 8 points/k=3 is 8/6 = 4/3 -> 1.33 (outputs column agrees)",
            mismatches.len()
        ),
    )
    .detail(mismatches)
}

// ---- 3: Table 2 ----

struct Table2 {
    /// (n, 1D per-point, 2D per-point), n = 0 first.
    rows: Vec<(usize, f64, f64)>,
}

fn criterion_table2(t2: &Table2) -> Verdict {
    let mut worst: f64 = 1.0;
    let mut bad = Vec::new();
    let mut lines = Vec::new();
    for (&(n, e1, e2), &(r1, r2)) in t2.rows.iter().zip(&REF_TABLE2) {
        let f1 = (e1 / r1).max(r1 / e1);
        let f2 = (e2 / r2).max(r2 / e2);
        worst = worst.max(f1).max(f2);
        lines.push(format!("n={n:>2}  1D {e1:.3e} (ref {r1:.2e}, x{:.2})  2D {e2:.3e} (ref {r2:.2e}, x{:.2})", e1 / r1, e2 / r2));
        if f1 > TABLE2_FACTOR || f2 > TABLE2_FACTOR {
            bad.push(n);
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!("{} rows x 2 dims within factor {TABLE2_FACTOR}; worst factor {worst:.2}; rows outside: {bad:?}", t2.rows.len()),
    )
    .detail(lines)
}

// ---- 4: modified vs unmodified ----

fn criterion_modified() -> Result<Verdict> {
    let mut lines = Vec::new();
    let mut all = Vec::new();
    let mut means = Vec::new();
    for dims in dims_list() {
        let mut reductions = Vec::new();
        for n in CURATED_SIZES {
            let set = curated_points(Curated::Fp32, dims, n)?;
            // The finite points of the next curated set; for the largest size
            // the best pool point takes the place of infinity.
            let unmodified: Vec<Point> = if n < *CURATED_SIZES.end() {
                curated_points(Curated::Fp32, dims, n + 1)?.into_iter().filter(|p| !p.is_infinity()).collect()
            } else {
                strongest_unmodified(&set, 3, dims, cfg(), MODIFIED_SCREEN_TRIALS, SEED)?
            };
            let m = modified_vs_unmodified(&unmodified, 3, dims, cfg(), MODIFIED_SCREEN_TRIALS, TRIALS, SEED)?;
            let r = m.reduction();
            lines.push(format!(
                "{} n={n:>2}  reduction {:>6.1}%  (inf replaces {}, CI of ratio [{:.3}, {:.3}])",
                dname(dims),
                100.0 * r,
                m.replaced,
                m.comparison.ci_low,
                m.comparison.ci_high
            ));
            reductions.push(r);
        }
        means.push(reductions.iter().sum::<f64>() / reductions.len() as f64);
        all.extend(reductions);
    }
    let below = all.iter().filter(|&&r| r < MODIFIED_MIN_REDUCTION).count();
    let min = all.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Verdict::new(
        below == 0,
        format!(
            "{below}/{} sets below {:.0}%; min {:.1}%, mean 1D {:.1}%, mean 2D {:.1}%",
            all.len(),
            100.0 * MODIFIED_MIN_REDUCTION,
            100.0 * min,
            100.0 * means[0],
            100.0 * means[1]
        ),
    )
    .detail(lines))
}

// ---- 5: Huffman order ----

fn criterion_huffman() -> Result<Verdict> {
    let mut lines = Vec::new();
    let mut means = Vec::new();
    for dims in dims_list() {
        let mut reductions = Vec::new();
        for n in 4..=16 {
            let ts = build(3, n - 2, &curated_points(Curated::Fp32, dims, n)?)?;
            let lin = ConvConfig::new(Precision::Fp32, DotOrder::Linear, ChannelSum::Linear);
            let huf = ConvConfig::new(Precision::Fp32, DotOrder::Huffman, ChannelSum::Linear);
            let l = measure_error(&ts, dims, lin, TRIALS, SEED)?.per_point_l1_mean;
            let h = measure_error(&ts, dims, huf, TRIALS, SEED)?.per_point_l1_mean;
            reductions.push(1.0 - h / l);
        }
        let mean = reductions.iter().sum::<f64>() / reductions.len() as f64;
        lines.push(format!(
            "{}: per-n reduction % {:?}",
            dname(dims),
            reductions.iter().map(|r| (1000.0 * r).round() / 10.0).collect::<Vec<_>>()
        ));
        means.push(mean);
    }
    Ok(Verdict::new(
        means.iter().all(|&m| m >= HUFFMAN_MIN_REDUCTION),
        format!(
            "mean reduction over n=4..16: 1D {:.1}%, 2D {:.1}% (threshold {:.0}%; reference 14% / 12%)",
            100.0 * means[0],
            100.0 * means[1],
            100.0 * HUFFMAN_MIN_REDUCTION
        ),
    )
    .detail(lines))
}

// ---- 6: mixed precision ----

fn criterion_mixed() -> Result<Verdict> {
    let rows = table3_rows(&opts())?;
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    for ((a, b), &(r1, r2)) in rows.iter().skip(1).zip(&REF_TABLE3_RATIO) {
        let n = a.mixed.n;
        for (dims, got, want) in [(Dims::One, a.ratio, r1), (Dims::Two, b.ratio, r2)] {
            let ok = got < MIXED_MAX_RATIO && (got - want).abs() <= MIXED_TOLERANCE;
            if !ok {
                bad.push(format!("{} n={n}", dname(dims)));
            }
        }
        lines.push(format!("n={n:>2}  1D {:.3} (ref {r1:.2})  2D {:.3} (ref {r2:.2})", a.ratio, b.ratio));
    }
    Ok(Verdict::new(
        bad.is_empty(),
        format!("{} ratios; each < {MIXED_MAX_RATIO} and within +-{MIXED_TOLERANCE}; failing: {bad:?}", 2 * REF_TABLE3_RATIO.len()),
    )
    .detail(lines))
}

// ---- 7: channel summation ----

fn criterion_channels() -> Result<Verdict> {
    let o = opts();
    let f1 = channel_rows(Dims::One, Precision::Fp32, &o)?;
    let f2 = channel_rows(Dims::Two, Precision::Fp32, &o)?;
    let m1 = channel_rows(Dims::One, Precision::Mixed, &o)?;
    let m2 = channel_rows(Dims::Two, Precision::Mixed, &o)?;
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    for (name, rows, reference) in [("fp32 1D", &f1, &REF_TABLE4), ("fp32 2D", &f2, &REF_TABLE5)] {
        for (r, want) in rows.iter().zip(reference) {
            let got = r.ratios();
            for k in 0..2 {
                let pct = 100.0 * got[k];
                if (pct - want[k]).abs() > 100.0 * CHANNEL_TOLERANCE || got[k] >= 1.0 {
                    bad.push(format!("{name} n_o={} C={}", r.n_o, [32, 64][k]));
                }
            }
            lines.push(format!(
                "{name} n_o={}  pairwise/linear C=32 {:.1}% (ref {}%), C=64 {:.1}% (ref {}%)",
                r.n_o,
                100.0 * got[0],
                want[0],
                100.0 * got[1],
                want[1]
            ));
        }
    }
    for (r, want) in combined_rows(&f1, &f2, &m1, &m2).iter().zip(&REF_TABLE8) {
        let got = [r.ratio_1d[0], r.ratio_1d[1], r.ratio_2d[0], r.ratio_2d[1]];
        for k in 0..4 {
            if (100.0 * got[k] - want[k]).abs() > 100.0 * CHANNEL_TOLERANCE {
                bad.push(format!("combined n_o={} col {k}", r.n_o));
            }
        }
        lines.push(format!(
            "combined n_o={}  {:.1}% {:.1}% {:.1}% {:.1}% (ref {:?})",
            r.n_o,
            100.0 * got[0],
            100.0 * got[1],
            100.0 * got[2],
            100.0 * got[3],
            want
        ));
    }
    Ok(Verdict::new(
        bad.is_empty(),
        format!("pairwise < linear and within +-{:.0} points on every row; failing: {bad:?}", 100.0 * CHANNEL_TOLERANCE),
    )
    .detail(lines))
}

// ---- 8: Chebyshev ----

fn criterion_chebyshev() -> Result<Verdict> {
    let rows = chebyshev_rows(&opts())?;
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    for ((a, b), &(r1, r2)) in rows.iter().zip(&REF_CHEBYSHEV) {
        if a.n >= 8 && a.ratio <= CHEBYSHEV_1D_MIN {
            bad.push(format!("1D n={}", a.n));
        }
        if b.n >= 12 && b.ratio <= CHEBYSHEV_2D_MIN {
            bad.push(format!("2D n={}", b.n));
        }
        lines.push(format!("n={:>2}  1D x{:.2} (ref {r1})  2D x{:.3e} (ref {r2:.3e})", a.n, a.ratio, b.ratio));
    }
    Ok(Verdict::new(
        bad.is_empty(),
        format!("1D ratio > {CHEBYSHEV_1D_MIN} for n >= 8, 2D ratio > {CHEBYSHEV_2D_MIN} for n >= 12; failing: {bad:?}"),
    )
    .detail(lines))
}

// ---- 9: growth ----

fn criterion_growth(t2: &Table2) -> Result<Verdict> {
    let (d1, d2) = (t2.rows[0].1, t2.rows[0].2);
    let points: Vec<GrowthPoint> =
        t2.rows[1..].iter().map(|&(n, e1, e2)| GrowthPoint { n, error_1d: e1, error_2d: e2 }).collect();
    let g = growth_analysis(&points, d1, d2)?;
    let ref_points: Vec<GrowthPoint> = REF_TABLE2[1..]
        .iter()
        .zip(CURATED_SIZES)
        .map(|(&(e1, e2), n)| GrowthPoint { n, error_1d: e1, error_2d: e2 })
        .collect();
    let r = growth_analysis(&ref_points, REF_TABLE2[0].0, REF_TABLE2[0].1)?;
    let pass = g.fit_c >= GROWTH_C.0 && g.fit_c <= GROWTH_C.1 && g.monotone();
    let fmt = |v: &[f64]| v.iter().map(|d| format!("{d:.2}")).collect::<Vec<_>>().join(" ");
    Ok(Verdict::new(
        pass,
        format!(
            "c = {:.2} (sd of ln c {:.2}; range [{}, {}]; reference {REF_GROWTH_C}, same fit on reference errors {:.2}); all dlog > 0: {}",
            g.fit_c, g.fit_log_sd, GROWTH_C.0, GROWTH_C.1, r.fit_c, g.monotone()
        ),
    )
    .detail([format!("dlog 1D: {}", fmt(&g.delta_log_1d)), format!("dlog 2D: {}", fmt(&g.delta_log_2d))]))
}

// ---- 10: bound dominance ----

/// Bound on `|fl64(direct) - exact|` per output for fp32 inputs: products
/// are exact in fp64 and `k` terms are summed.
fn reference_slack(h: &Tensor, x: &Tensor) -> Result<Vec<f64>> {
    let abs = |t: &Tensor| Tensor::new(t.dims(), t.channels(), t.size(), t.data().iter().map(|v| v.abs()).collect());
    let terms = (h.channels() * h.channel_len()) as f64;
    let s = conv_direct_with(&abs(h)?, &abs(x)?, Precision::Fp64, ChannelSum::Linear)?;
    let u = FloatFormat::Fp64.unit_roundoff();
    Ok(s.data().iter().map(|v| 1.01 * terms * u * v).collect())
}

#[derive(Default)]
struct Dominance {
    configs: usize,
    trials: usize,
    violations: usize,
    worst_normwise: f64,
    worst_componentwise: f64,
}

impl Dominance {
    fn check(&mut self, ts: &TransformSet, dims: Dims, channels: usize, sum: Option<ChannelSum>) -> Result<()> {
        let run_cfg = ConvConfig::new(Precision::Fp32, DotOrder::Huffman, sum.unwrap_or_default());
        let consts = SummationConstants::for_transform(ts, DotOrder::Huffman, FloatFormat::Fp32);
        self.configs += 1;
        for t in 0..TRIALS {
            let (h, x) = trial_inputs(SEED, t, dims, channels, ts.n_h(), ts.n());
            let got = conv(ts, &h, &x, &run_cfg)?;
            let want = conv_direct_with(&h, &x, Precision::Fp64, ChannelSum::Linear)?;
            let slack = reference_slack(&h, &x)?;
            let report = match (sum, dims) {
                (Some(s), _) => bound_multichannel(ts, &h, &x, s, &consts, FloatFormat::Fp32)?,
                (None, Dims::One) => bound_1d(ts, &h, &x, &consts, FloatFormat::Fp32)?,
                (None, Dims::Two) => bound_2d(ts, &h, &x, &consts, FloatFormat::Fp32)?,
            };
            let diff: Vec<f64> = got.data().iter().zip(want.data()).map(|(a, b)| (a - b).abs()).collect();
            let upper: Vec<f64> = diff.iter().zip(&slack).map(|(d, s)| d + s).collect();
            let norm = error_norm(dims, ts.n_o(), &upper);
            let mut ok = norm <= report.normwise_bound;
            self.worst_normwise = self.worst_normwise.max(norm / report.normwise_bound);
            for (e, b) in upper.iter().zip(&report.componentwise_bounds) {
                ok &= e <= b;
                if *b > 0.0 {
                    self.worst_componentwise = self.worst_componentwise.max(e / b);
                }
            }
            self.trials += 1;
            if !ok {
                self.violations += 1;
            }
        }
        Ok(())
    }
}

fn criterion_bounds() -> Result<Verdict> {
    let mut single = Dominance::default();
    for dims in dims_list() {
        for n in CURATED_SIZES {
            let ts = build(3, n - 2, &curated_points(Curated::Fp32, dims, n)?)?;
            single.check(&ts, dims, 1, None)?;
        }
    }
    let mut multi = Dominance::default();
    for dims in dims_list() {
        for n in [4, 6, 9] {
            let ts = build(3, n - 2, &curated_points(Curated::Fp32, dims, n)?)?;
            for c in [32, 64] {
                for s in [ChannelSum::Linear, ChannelSum::Pairwise] {
                    multi.check(&ts, dims, c, Some(s))?;
                }
            }
        }
    }
    let pass = single.violations == 0 && multi.violations == 0;
    let line = |name: &str, d: &Dominance| {
        format!(
            "{name}: {} configs, {} trials, {} violations; worst error/bound normwise {:.3}, componentwise {:.3}",
            d.configs, d.trials, d.violations, d.worst_normwise, d.worst_componentwise
        )
    };
    Ok(Verdict::new(pass, format!("{} + {} trials, {} violations", single.trials, multi.trials, single.violations + multi.violations))
        .detail([
            line("single channel, curated sets n=4..18, 1D and 2D", &single),
            line("multichannel C in {32,64}, linear and pairwise, n in {4,6,9}", &multi),
            "measured error includes a rigorous allowance for the fp64 reference's own rounding".to_string(),
        ]))
}

// ---- 11: running error ----

fn criterion_running() -> Result<Verdict> {
    let mut lines = Vec::new();
    let mut min_cov: f64 = 1.0;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for n in CURATED_SIZES {
        let ts = build(3, n - 2, &curated_points(Curated::Fp32, Dims::One, n)?)?;
        let s = running_error_study(&ts, &Experiment::new(Dims::One, cfg(), TRIALS, SEED))?;
        min_cov = min_cov.min(s.covered_fraction);
        lo = lo.min(s.ratio);
        hi = hi.max(s.ratio);
        lines.push(format!("n={n:>2}  coverage {:.4}  bound/actual {:.2}", s.covered_fraction, s.ratio));
    }
    let pass = min_cov >= RUNNING_MIN_COVERAGE && lo >= RUNNING_RATIO.0 && hi <= RUNNING_RATIO.1;
    Ok(Verdict::new(
        pass,
        format!(
            "1D n=4..18: min coverage {min_cov:.4} (need {RUNNING_MIN_COVERAGE}); ratio range {lo:.2}..{hi:.2} (need within [{}, {}]; reference {}..{})",
            RUNNING_RATIO.0, RUNNING_RATIO.1, REF_RUNNING_RATIO.0, REF_RUNNING_RATIO.1
        ),
    )
    .detail(lines))
}

// ---- 12: point search ----

fn criterion_search() -> Result<Verdict> {
    let cfg = SearchConfig { trials: TRIALS, seed: SEED, ..SearchConfig::default() };
    let mut lines = Vec::new();
    let mut verdicts = Vec::new();
    let cases = [
        (5, SearchState::seeded(), "0,-1,1,inf,1/2"),
        (8, SearchState::from_curated(Curated::Fp32, 7)?, "0,-1,1,inf,1/2,-1/2,2,-2"),
    ];
    for (n, state, target) in cases {
        let r = search_points(n, Dims::One, &state, &cfg)?;
        let want = canonical(&parse_points(target)?);
        let pos = r.candidates.iter().position(|c| canonical(&parse_points(&c.points).unwrap()) == want);
        let ok = pos.is_some_and(|i| r.candidates[i].tied_with_best);
        verdicts.push(ok);
        let leaders: Vec<String> = r.leaders().map(|c| format!("{{{}}}", c.points)).collect();
        lines.push(format!(
            "n={n}: {} candidates; leaders (first and ties): {}",
            r.candidates.len(),
            leaders.join(" ")
        ));
        match pos {
            Some(i) => {
                let c = &r.candidates[i];
                lines.push(format!(
                    "n={n}: {{{target}}} ranks {} with ratio {:.3} [{:.3}, {:.3}] to the first",
                    i + 1,
                    c.ratio_to_best,
                    c.ci_low,
                    c.ci_high
                ));
            }
            None => lines.push(format!("n={n}: {{{target}}} not among the candidates")),
        }
    }
    let summary = format!(
        "n=5 target first or tied: {}; n=8 target first or tied: {}",
        verdicts[0], verdicts[1]
    );
    Ok(Verdict::new(verdicts.iter().all(|&v| v), summary).detail(lines))
}

fn main() {
    let start = Instant::now();
    let table2 = || -> Result<Table2> {
        let rows = table2_rows(&opts())?
            .into_iter()
            .map(|(a, b)| (a.n, a.report.per_point_l1_mean, b.report.per_point_l1_mean))
            .collect();
        Ok(Table2 { rows })
    };
    let t2 = match table2() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot measure the fp32 error table: {e}");
            std::process::exit(1);
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Result<Verdict> + '_>)> = vec![
        ("exactness oracle", Box::new(criterion_exactness)),
        ("table 1 multiplication counts", Box::new(|| Ok(criterion_table1()))),
        ("table 2 fp32 errors", Box::new(|| Ok(criterion_table2(&t2)))),
        ("modified vs unmodified", Box::new(criterion_modified)),
        ("huffman summation order", Box::new(criterion_huffman)),
        ("mixed precision ratios", Box::new(criterion_mixed)),
        ("pairwise channel summation", Box::new(criterion_channels)),
        ("chebyshev comparison", Box::new(criterion_chebyshev)),
        ("growth law", Box::new(|| criterion_growth(&t2))),
        ("bound dominance", Box::new(criterion_bounds)),
        ("running error", Box::new(criterion_running)),
        ("point search", Box::new(criterion_search)),
    ];
    let mut passed = 0;
    let mut errors = 0;
    let mut summary = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(v) => {
                let tag = if v.pass { "PASS" } else { "FAIL" };
                passed += v.pass as usize;
                let line = format!("{tag} [{:>2}] {name}: {}", i + 1, v.summary);
                println!("{line}  ({:.1}s)", t.elapsed().as_secs_f64());
                for d in &v.details {
                    println!("          {d}");
                }
                summary.push(line);
            }
            Err(e) => {
                errors += 1;
                let line = format!("FAIL [{:>2}] {name}: could not be evaluated: {e}", i + 1);
                println!("{line}");
                summary.push(line);
            }
        }
    }
    println!();
    println!("acceptance summary ({passed}/{} PASS, {:.0}s):", criteria.len(), start.elapsed().as_secs_f64());
    for line in &summary {
        println!("{line}");
    }
    if errors > 0 {
        std::process::exit(1);
    }
}
