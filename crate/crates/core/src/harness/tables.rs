use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::data::{curated_points, Curated, CURATED_SIZES};
use super::measure::{measure, Algorithm, ErrorReport, Experiment};
use super::studies::{compare_chebyshev, ChebyshevRow};
use crate::engine::{ChannelSum, ConvConfig, DotOrder, Precision};
use crate::error::{Error, Result};
use crate::exact::{format_points, Rational};
use crate::matrix::{build, mult_count, Dims};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    D,
}

impl TableId {
    pub const ALL: [TableId; 9] =
        [TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::T6, TableId::T7, TableId::T8, TableId::D];
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "1" => TableId::T1,
            "2" => TableId::T2,
            "3" => TableId::T3,
            "4" => TableId::T4,
            "5" => TableId::T5,
            "6" => TableId::T6,
            "7" => TableId::T7,
            "8" => TableId::T8,
            "D" | "d" => TableId::D,
            other => return Err(Error::UnknownTable(other.to_string())),
        })
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableId::D => f.write_str("D"),
            t => write!(f, "{}", *t as u8 + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableOptions {
    pub trials: usize,
    pub seed: u64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { trials: 5000, seed: 0 }
    }
}

/// A rendered table: header plus string cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub id: TableId,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> =
                r.iter().map(|c| if c.contains(',') { format!("\"{c}\"") } else { c.clone() }).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Space-aligned columns.
    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| self.rows.iter().map(|r| r[j].len()).chain([self.columns[j].len()]).max().unwrap_or(0))
            .collect();
        let mut s = String::new();
        for line in std::iter::once(&self.columns).chain(&self.rows) {
            let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(s, "{}", cells.join("  ").trim_end());
        }
        s
    }
}

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

fn pct(v: f64) -> String {
    format!("{:.1}", 100.0 * v)
}

/// Rational rounded half-up to two decimals, trailing zeros dropped.
pub fn two_decimals(r: &Rational) -> String {
    let hundred = Rational::integer(100);
    let scaled = &(r * &hundred) + &Rational::new(1, 2).expect("valid");
    let q = scaled.numer() / scaled.denom();
    let cents: i64 = q.try_into().expect("small");
    let (int, frac) = (cents / 100, cents % 100);
    match frac {
        0 => format!("{int}"),
        f if f % 10 == 0 => format!("{int}.{}", f / 10),
        f => format!("{int}.{f:02}"),
    }
}

// ---- Table 1 ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultCell {
    pub n_o: usize,
    pub mults_per_output: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    /// Number of points; 0 stands for direct convolution.
    pub points: usize,
    /// Kernel 3 1D, 3x3, 5 1D, 5x5; `None` where the kernel needs more points.
    pub cells: [Option<MultCell>; 4],
}

pub const TABLE1_POINTS: [usize; 14] = [0, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16];

pub fn table1_rows() -> Vec<Table1Row> {
    TABLE1_POINTS
        .iter()
        .map(|&points| {
            let cell = |k: usize, dims: Dims| {
                if points == 0 {
                    let direct = Rational::integer((k as i64).pow(dims.count()));
                    return Some(MultCell { n_o: 1, mults_per_output: direct });
                }
                let n_o = (points + 1).checked_sub(k).filter(|&n_o| n_o >= 2)?;
                Some(MultCell { n_o, mults_per_output: mult_count(k, n_o, dims).mults_per_output })
            };
            Table1Row {
                points,
                cells: [cell(3, Dims::One), cell(3, Dims::Two), cell(5, Dims::One), cell(5, Dims::Two)],
            }
        })
        .collect()
}

fn render_table1() -> Table {
    let mut columns = vec!["points".to_string()];
    for name in ["k3", "k3x3", "k5", "k5x5"] {
        columns.extend([format!("{name}_outputs"), format!("{name}_mults_per_output"), format!("{name}_rounded")]);
    }
    let rows = table1_rows()
        .into_iter()
        .map(|r| {
            let mut row = vec![r.points.to_string()];
            for (j, c) in r.cells.iter().enumerate() {
                match c {
                    Some(c) => {
                        let outputs = if j % 2 == 1 { format!("{0}x{0}", c.n_o) } else { c.n_o.to_string() };
                        row.extend([outputs, c.mults_per_output.to_string(), two_decimals(&c.mults_per_output)]);
                    }
                    None => row.extend(["-".to_string(), "-".to_string(), "-".to_string()]),
                }
            }
            row
        })
        .collect();
    Table { id: TableId::T1, columns, rows }
}

// ---- Tables 2 and 3 ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    /// 0 for direct convolution.
    pub n: usize,
    pub points: String,
    pub dims: Dims,
    pub report: ErrorReport,
}

fn measure_row(n: usize, which: Curated, dims: Dims, cfg: ConvConfig, channels: usize, opts: &TableOptions) -> Result<ErrorRow> {
    let exp = Experiment::new(dims, cfg, opts.trials, opts.seed).with_channels(channels);
    if n == 0 {
        let report = measure(Algorithm::Direct { n_h: 3, n_o: 1 }, &exp)?;
        return Ok(ErrorRow { n, points: "direct".into(), dims, report });
    }
    let points = curated_points(which, dims, n)?;
    let ts = build(3, n - 2, &points)?;
    let report = measure(Algorithm::ToomCook(&ts), &exp)?;
    Ok(ErrorRow { n, points: format_points(&points), dims, report })
}

fn table_sizes() -> impl Iterator<Item = usize> {
    std::iter::once(0).chain(CURATED_SIZES)
}

fn config(precision: Precision, channel_sum: ChannelSum) -> ConvConfig {
    ConvConfig::new(precision, DotOrder::Huffman, channel_sum)
}

/// Per-row fp32 errors of the bundled fp32 sets, 1D and 2D, direct first.
pub fn table2_rows(opts: &TableOptions) -> Result<Vec<(ErrorRow, ErrorRow)>> {
    let cfg = config(Precision::Fp32, ChannelSum::Linear);
    table_sizes()
        .map(|n| {
            Ok((
                measure_row(n, Curated::Fp32, Dims::One, cfg, 1, opts)?,
                measure_row(n, Curated::Fp32, Dims::Two, cfg, 1, opts)?,
            ))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedRow {
    pub mixed: ErrorRow,
    /// The fp32 error of the fp32 set of the same size.
    pub fp32_error: f64,
    pub ratio: f64,
}

/// Mixed-precision errors of the bundled mixed sets, with the ratio to the
/// fp32 error of the fp32 set of the same size (same trials).
pub fn table3_rows(opts: &TableOptions) -> Result<Vec<(MixedRow, MixedRow)>> {
    let mixed = config(Precision::Mixed, ChannelSum::Linear);
    let fp32 = config(Precision::Fp32, ChannelSum::Linear);
    let row = |n, dims| -> Result<MixedRow> {
        let m = measure_row(n, Curated::Mixed, dims, mixed, 1, opts)?;
        let f = measure_row(n, Curated::Fp32, dims, fp32, 1, opts)?;
        let fp32_error = f.report.per_point_l1_mean;
        let ratio = m.report.per_point_l1_mean / fp32_error;
        Ok(MixedRow { mixed: m, fp32_error, ratio })
    };
    table_sizes().map(|n| Ok((row(n, Dims::One)?, row(n, Dims::Two)?))).collect()
}

fn render_errors(id: TableId, rows: Vec<(ErrorRow, ErrorRow)>) -> Table {
    let columns = ["n", "points_1d", "total_l1_1d", "per_point_1d", "points_2d", "total_l1_2d", "per_point_2d"];
    let rows = rows
        .into_iter()
        .map(|(a, b)| {
            vec![
                a.n.to_string(),
                a.points,
                sci(a.report.total_l1_mean),
                sci(a.report.per_point_l1_mean),
                b.points,
                sci(b.report.total_l1_mean),
                sci(b.report.per_point_l1_mean),
            ]
        })
        .collect();
    Table { id, columns: columns.map(String::from).to_vec(), rows }
}

fn render_mixed(rows: Vec<(MixedRow, MixedRow)>) -> Table {
    let columns = ["n", "points_1d", "per_point_1d", "ratio_1d", "points_2d", "per_point_2d", "ratio_2d"];
    let rows = rows
        .into_iter()
        .map(|(a, b)| {
            vec![
                a.mixed.n.to_string(),
                a.mixed.points,
                sci(a.mixed.report.per_point_l1_mean),
                format!("{:.3}", a.ratio),
                b.mixed.points,
                sci(b.mixed.report.per_point_l1_mean),
                format!("{:.3}", b.ratio),
            ]
        })
        .collect();
    Table { id: TableId::T3, columns: columns.map(String::from).to_vec(), rows }
}

// ---- Tables 4 to 8 ----

pub const CHANNEL_COUNTS: [usize; 2] = [32, 64];
pub const CHANNEL_ROWS: std::ops::RangeInclusive<usize> = 1..=7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelRow {
    pub n_o: usize,
    pub points: String,
    pub single: f64,
    /// Per channel count: linear and pairwise per-point errors.
    pub linear: [f64; 2],
    pub pairwise: [f64; 2],
}

impl ChannelRow {
    /// `pairwise / linear` per channel count.
    pub fn ratios(&self) -> [f64; 2] {
        [self.pairwise[0] / self.linear[0], self.pairwise[1] / self.linear[1]]
    }
}

/// Multi-channel errors, linear and pairwise channel summation; row `n_o = 1`
/// is direct convolution, the others use the bundled sets with `n_o + 2` points.
pub fn channel_rows(dims: Dims, precision: Precision, opts: &TableOptions) -> Result<Vec<ChannelRow>> {
    let which = match precision {
        Precision::Mixed => Curated::Mixed,
        _ => Curated::Fp32,
    };
    CHANNEL_ROWS
        .map(|n_o| {
            let n = if n_o == 1 { 0 } else { n_o + 2 };
            let err = |c, how| measure_row(n, which, dims, config(precision, how), c, opts);
            let single = err(1, ChannelSum::Linear)?;
            let mut linear = [0.0; 2];
            let mut pairwise = [0.0; 2];
            for (k, &c) in CHANNEL_COUNTS.iter().enumerate() {
                linear[k] = err(c, ChannelSum::Linear)?.report.per_point_l1_mean;
                pairwise[k] = err(c, ChannelSum::Pairwise)?.report.per_point_l1_mean;
            }
            Ok(ChannelRow { n_o, points: single.points, single: single.report.per_point_l1_mean, linear, pairwise })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombinedRow {
    pub n_o: usize,
    /// Mixed precision with pairwise summation over fp32 with linear summation,
    /// per channel count, 1D then 2D.
    pub ratio_1d: [f64; 2],
    pub ratio_2d: [f64; 2],
}

/// Combines the fp32 (4, 5) and mixed (6, 7) channel tables.
pub fn combined_rows(
    fp32_1d: &[ChannelRow],
    fp32_2d: &[ChannelRow],
    mixed_1d: &[ChannelRow],
    mixed_2d: &[ChannelRow],
) -> Vec<CombinedRow> {
    let r = |m: &ChannelRow, f: &ChannelRow| [m.pairwise[0] / f.linear[0], m.pairwise[1] / f.linear[1]];
    (0..fp32_1d.len())
        .map(|i| CombinedRow {
            n_o: fp32_1d[i].n_o,
            ratio_1d: r(&mixed_1d[i], &fp32_1d[i]),
            ratio_2d: r(&mixed_2d[i], &fp32_2d[i]),
        })
        .collect()
}

fn render_channels(id: TableId, dims: Dims, rows: Vec<ChannelRow>) -> Table {
    let columns = ["n_o", "points", "c1", "c32_linear", "c32_pairwise", "c32_pct", "c64_linear", "c64_pairwise", "c64_pct"];
    let rows = rows
        .into_iter()
        .map(|r| {
            let ratios = r.ratios();
            let n_o = match dims {
                Dims::One => r.n_o.to_string(),
                Dims::Two => format!("{0}x{0}", r.n_o),
            };
            vec![
                n_o,
                r.points,
                sci(r.single),
                sci(r.linear[0]),
                sci(r.pairwise[0]),
                pct(ratios[0]),
                sci(r.linear[1]),
                sci(r.pairwise[1]),
                pct(ratios[1]),
            ]
        })
        .collect();
    Table { id, columns: columns.map(String::from).to_vec(), rows }
}

fn render_combined(rows: Vec<CombinedRow>) -> Table {
    let columns = ["n_o", "c32_pct_1d", "c64_pct_1d", "c32_pct_2d", "c64_pct_2d"];
    let rows = rows
        .into_iter()
        .map(|r| vec![r.n_o.to_string(), pct(r.ratio_1d[0]), pct(r.ratio_1d[1]), pct(r.ratio_2d[0]), pct(r.ratio_2d[1])])
        .collect();
    Table { id: TableId::T8, columns: columns.map(String::from).to_vec(), rows }
}

// ---- Chebyshev ----

pub fn chebyshev_rows(opts: &TableOptions) -> Result<Vec<(ChebyshevRow, ChebyshevRow)>> {
    let cfg = ConvConfig::default();
    let one = compare_chebyshev(CURATED_SIZES, Dims::One, cfg, opts.trials, opts.seed)?;
    let two = compare_chebyshev(CURATED_SIZES, Dims::Two, cfg, opts.trials, opts.seed)?;
    Ok(one.into_iter().zip(two).collect())
}

fn render_chebyshev(rows: Vec<(ChebyshevRow, ChebyshevRow)>) -> Table {
    let columns = ["n", "curated_1d", "chebyshev_1d", "ratio_1d", "curated_2d", "chebyshev_2d", "ratio_2d"];
    let rows = rows
        .into_iter()
        .map(|(a, b)| {
            vec![
                a.n.to_string(),
                sci(a.curated),
                sci(a.chebyshev),
                format!("{:.3}", a.ratio),
                sci(b.curated),
                sci(b.chebyshev),
                format!("{:.3}", b.ratio),
            ]
        })
        .collect();
    Table { id: TableId::D, columns: columns.map(String::from).to_vec(), rows }
}

/// Regenerate one table's measured columns. Deterministic given the options.
pub fn reproduce_table(which: TableId, opts: &TableOptions) -> Result<Table> {
    if opts.trials == 0 {
        return Err(Error::Size("trials must be at least 1".into()));
    }
    Ok(match which {
        TableId::T1 => render_table1(),
        TableId::T2 => render_errors(TableId::T2, table2_rows(opts)?),
        TableId::T3 => render_mixed(table3_rows(opts)?),
        TableId::T4 => render_channels(TableId::T4, Dims::One, channel_rows(Dims::One, Precision::Fp32, opts)?),
        TableId::T5 => render_channels(TableId::T5, Dims::Two, channel_rows(Dims::Two, Precision::Fp32, opts)?),
        TableId::T6 => render_channels(TableId::T6, Dims::One, channel_rows(Dims::One, Precision::Mixed, opts)?),
        TableId::T7 => render_channels(TableId::T7, Dims::Two, channel_rows(Dims::Two, Precision::Mixed, opts)?),
        TableId::T8 => render_combined(combined_rows(
            &channel_rows(Dims::One, Precision::Fp32, opts)?,
            &channel_rows(Dims::Two, Precision::Fp32, opts)?,
            &channel_rows(Dims::One, Precision::Mixed, opts)?,
            &channel_rows(Dims::Two, Precision::Mixed, opts)?,
        )),
        TableId::D => render_chebyshev(chebyshev_rows(opts)?),
    })
}
