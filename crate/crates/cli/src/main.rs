use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use toomcook::analysis::{
    bound_1d, bound_2d, bound_multichannel, condition_bound, SummationConstants,
};
use toomcook::engine::{conv, conv_direct_with, conv_tracked, ChannelSum, ConvConfig, DotOrder, Precision, Tensor};
use toomcook::exact::{parse_points, Point, Rational};
use toomcook::harness::{
    measure, search_points, trial_inputs, Algorithm, Curated, Experiment, SearchConfig, SearchState, TableId,
    TableOptions, reproduce_table,
};
use toomcook::matrix::{build, chebyshev_points, Dims, Matrix, MatrixFile, TransformSet};
use toomcook::{Error, Result};

mod output;

use output::{Format, Output};

/// Toom-Cook convolution: generate transforms, run and measure them.
#[derive(Debug, Parser)]
#[command(name = "toomcook", version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo trials.
    #[arg(long, global = true, default_value_t = 5000)]
    trials: usize,
    /// fp32, fp64 or mixed (fp64 transforms, fp32 products and sums).
    #[arg(long, global = true, default_value = "fp32")]
    precision: Precision,
    /// Summation order inside the transforms: huffman or linear.
    #[arg(long, global = true, default_value = "huffman")]
    dot_order: DotOrder,
    /// Summation of channel products: linear or pairwise.
    #[arg(long, global = true, default_value = "linear")]
    channel_sum: ChannelSum,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout. Relative paths are
    /// resolved against $TOOMCOOK_OUT_DIR when it is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> ConvConfig {
        ConvConfig::new(self.precision, self.dot_order, self.channel_sum)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Modified {
    /// Modified exactly when the points include inf.
    Auto,
    /// Require inf among the points.
    Yes,
    /// Reject inf.
    No,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the transform matrices for a point set.
    Gen {
        /// Kernel size.
        #[arg(long, default_value_t = 3)]
        nh: usize,
        /// Outputs; defaults to points - nh + 1.
        #[arg(long)]
        no: Option<usize>,
        /// Comma-separated points, e.g. "0,-1,1,inf".
        #[arg(long, conflicts_with = "chebyshev", required_unless_present = "chebyshev")]
        points: Option<String>,
        /// Use N Chebyshev nodes instead of explicit points.
        #[arg(long, value_name = "N")]
        chebyshev: Option<usize>,
        #[arg(long, value_enum, default_value_t = Modified::Auto)]
        modified: Modified,
    },
    /// Convolve a kernel with an input (JSON or CSV tensors).
    Convolve {
        /// Transform file from `gen`; omit for direct convolution.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Also report a running error bound per output.
        #[arg(long)]
        running: bool,
    },
    /// Mean error against an fp64 direct reference over random trials.
    Measure {
        /// Transform file from `gen`; omit to measure direct convolution.
        #[arg(long, required_unless_present = "direct")]
        matrix: Option<PathBuf>,
        /// Measure direct convolution of the given kernel and output sizes.
        #[arg(long, num_args = 2, value_names = ["NH", "NO"], conflicts_with = "matrix")]
        direct: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1)]
        dims: u32,
        #[arg(long, default_value_t = 1)]
        channels: usize,
        /// Include the per-trial errors in JSON output.
        #[arg(long)]
        per_trial: bool,
    },
    /// Rank one-point extensions of the best known (n-1)-point sets.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        dims: u32,
        #[arg(long, default_value_t = 3)]
        nh: usize,
        /// Start from the bundled fp32 sets instead of only {0,-1,1,inf}.
        #[arg(long)]
        curated: bool,
        /// Print only the first K candidates.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Analytic error bounds for one kernel/input pair.
    Bounds {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1)]
        dims: u32,
        /// Channels; more than one uses the multichannel bound with --channel-sum.
        #[arg(long, default_value_t = 1)]
        channels: usize,
        /// Kernel tensor; drawn from --seed when omitted.
        #[arg(long, requires = "input")]
        kernel: Option<PathBuf>,
        #[arg(long, requires = "kernel")]
        input: Option<PathBuf>,
        /// Add the conditioning estimate (1D, single channel).
        #[arg(long)]
        condition: bool,
    },
    /// Regenerate a results table: 1-8 or D.
    Table {
        /// Table id: 1..8, or D for the Chebyshev comparison.
        #[arg(long)]
        which: TableId,
    },
}

fn dims_of(d: u32) -> Result<Dims> {
    Dims::from_count(d).ok_or_else(|| Error::Size(format!("--dims must be 1 or 2, got {d}")))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_matrix(path: &Path) -> Result<TransformSet> {
    MatrixFile::from_json(&read_text(path)?)?.to_transform()
}

fn read_tensor(path: &Path) -> Result<Tensor> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        Tensor::from_json(&text)
    } else {
        Tensor::from_csv(&text)
    }
}

fn grid(m: &Matrix<Rational>) -> String {
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn matrix_csv(ts: &TransformSet) -> String {
    let mut out = String::from("matrix,row,col,value\n");
    for (name, m) in [("A_T", ts.a_t()), ("G", ts.g()), ("B_T", ts.b_t())] {
        for (i, row) in m.to_rows().iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out.push_str(&format!("{name},{i},{j},{v}\n"));
            }
        }
    }
    out
}

fn values_line(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

fn gen(nh: usize, no: Option<usize>, points: Option<&str>, chebyshev: Option<usize>, modified: Modified, fmt: Format) -> Result<Output> {
    let points: Vec<Point> = match (points, chebyshev) {
        (Some(s), _) => parse_points(s)?,
        (None, Some(n)) => chebyshev_points(n),
        (None, None) => return Err(Error::Parse("one of --points or --chebyshev is required".into())),
    };
    let has_inf = points.contains(&Point::Infinity);
    match modified {
        Modified::Yes if !has_inf => return Err(Error::Infinity("--modified yes needs inf among the points".into())),
        Modified::No if has_inf => return Err(Error::Infinity("--modified no forbids inf".into())),
        _ => {}
    }
    if points.len() + 1 < nh {
        return Err(Error::Size(format!("{} points leave no outputs for kernel size {nh}", points.len())));
    }
    let no = no.unwrap_or(points.len() + 1 - nh);
    let ts = build(nh, no, &points)?;
    Ok(match fmt {
        Format::Json => Output::json(MatrixFile::from_transform(&ts).to_json()?),
        Format::Csv => Output::new(matrix_csv(&ts)),
        Format::Text => Output::new(format!(
            "{}\nA_T =\n{}\nG =\n{}\nB_T =\n{}\n",
            ts.descriptor(),
            grid(ts.a_t()),
            grid(ts.g()),
            grid(ts.b_t())
        )),
    })
}

fn convolve(c: &Common, matrix: Option<&Path>, kernel: &Path, input: &Path, running: bool) -> Result<Output> {
    let (h, x) = (read_tensor(kernel)?, read_tensor(input)?);
    let cfg = c.config();
    let (y, bounds) = match matrix {
        Some(p) => {
            let ts = read_matrix(p)?;
            if running {
                let (y, b) = conv_tracked(&ts, &h, &x, &cfg)?;
                (y, Some(b))
            } else {
                (conv(&ts, &h, &x, &cfg)?, None)
            }
        }
        None if running => return Err(Error::Mismatch("--running needs a transform (--matrix)".into())),
        None => (conv_direct_with(&h, &x, cfg.precision, cfg.channel_sum)?, None),
    };
    Ok(match (c.format, bounds) {
        (Format::Json, None) => Output::json(y.to_json()?),
        (Format::Json, Some(b)) => Output::json(serde_json::to_string_pretty(&json!({ "output": y, "running_bound": b }))?),
        (Format::Csv, None) => Output::new(y.to_csv()),
        (Format::Csv, Some(b)) => {
            let mut s = String::from("index,value,running_bound\n");
            for (i, (v, e)) in y.data().iter().zip(&b).enumerate() {
                s.push_str(&format!("{i},{v:?},{e:?}\n"));
            }
            Output::new(s)
        }
        (Format::Text, b) => {
            let mut s = format!("output: {}\n", values_line(y.data()));
            if let Some(b) = b {
                s.push_str(&format!("running bound: {}\n", values_line(&b)));
            }
            Output::new(s)
        }
    })
}

fn measure_cmd(c: &Common, matrix: Option<&Path>, direct: Option<&[usize]>, dims: u32, channels: usize, per_trial: bool) -> Result<Output> {
    let ts;
    let alg = match (matrix, direct) {
        (Some(p), _) => {
            ts = read_matrix(p)?;
            Algorithm::ToomCook(&ts)
        }
        (None, Some(&[n_h, n_o])) if n_h > 0 && n_o > 0 => Algorithm::Direct { n_h, n_o },
        _ => return Err(Error::Size("--direct needs two positive sizes NH NO".into())),
    };
    let exp = Experiment::new(dims_of(dims)?, c.config(), c.trials, c.seed).with_channels(channels);
    let mut r = measure(alg, &exp)?;
    if !per_trial {
        r = r.without_trials();
    }
    Ok(match c.format {
        Format::Json => Output::json(serde_json::to_string_pretty(&r)?),
        Format::Csv => Output::new(format!(
            "descriptor,dims,config,channels,trials,seed,n_o,total_l1_mean,per_point_l1_mean\n\"{}\",{},{},{},{},{},{},{:e},{:e}\n",
            r.descriptor,
            r.dims.count(),
            r.config,
            r.channels,
            r.trials,
            r.seed,
            r.n_o,
            r.total_l1_mean,
            r.per_point_l1_mean
        )),
        Format::Text => Output::new(format!(
            "{}\n  dims {}, {}, {} channel(s), {} trials, seed {}\n  per-point L1 mean {:.3e}\n  total L1 mean     {:.3e}\n",
            r.descriptor,
            r.dims.count(),
            r.config,
            r.channels,
            r.trials,
            r.seed,
            r.per_point_l1_mean,
            r.total_l1_mean
        )),
    })
}

fn search_cmd(c: &Common, n: usize, dims: u32, nh: usize, curated: bool, top: Option<usize>) -> Result<Output> {
    let state = if curated && n > 5 { SearchState::from_curated(Curated::Fp32, n - 1)? } else { SearchState::seeded() };
    let cfg = SearchConfig { n_h: nh, config: c.config(), trials: c.trials, seed: c.seed };
    let mut r = search_points(n, dims_of(dims)?, &state, &cfg)?;
    if let Some(k) = top {
        r.candidates.truncate(k);
    }
    Ok(match c.format {
        Format::Json => Output::json(serde_json::to_string_pretty(&r)?),
        Format::Csv => {
            let mut s = String::from("rank,points,base_dims,per_point_l1_mean,ratio_to_best,ci_low,ci_high,tied\n");
            for (i, k) in r.candidates.iter().enumerate() {
                s.push_str(&format!(
                    "{},\"{}\",{},{:e},{},{},{},{}\n",
                    i + 1,
                    k.points,
                    k.base_dims.count(),
                    k.per_point_l1_mean,
                    k.ratio_to_best,
                    k.ci_low,
                    k.ci_high,
                    k.tied_with_best
                ));
            }
            Output::new(s)
        }
        Format::Text => {
            let mut s = format!("n={} dims={} ({} candidates)\n", r.n, r.dims.count(), r.candidates.len());
            for (i, k) in r.candidates.iter().enumerate() {
                s.push_str(&format!(
                    "{:>3}  {:.3e}  x{:.3} [{:.3}, {:.3}]{}  {}\n",
                    i + 1,
                    k.per_point_l1_mean,
                    k.ratio_to_best,
                    k.ci_low,
                    k.ci_high,
                    if k.tied_with_best { " tie" } else { "    " },
                    k.points
                ));
            }
            Output::new(s)
        }
    })
}

fn bounds_cmd(
    c: &Common,
    matrix: &Path,
    dims: u32,
    channels: usize,
    tensors: Option<(&Path, &Path)>,
    condition: bool,
) -> Result<Output> {
    let ts = read_matrix(matrix)?;
    let dims = dims_of(dims)?;
    let (h, x) = match tensors {
        Some((k, i)) => (read_tensor(k)?, read_tensor(i)?),
        None => {
            if channels == 0 {
                return Err(Error::Size("channels must be at least 1".into()));
            }
            trial_inputs(c.seed, 0, dims, channels, ts.n_h(), ts.n())
        }
    };
    if h.dims() != dims {
        return Err(Error::Shape(format!("tensors are {}D but --dims is {}", h.dims().count(), dims.count())));
    }
    let format = c.precision.inner_format();
    let consts = SummationConstants::for_transform(&ts, c.dot_order, c.precision.transform_format());
    let report = match (h.channels(), dims) {
        (1, _) if channels == 1 => match dims {
            Dims::One => bound_1d(&ts, &h, &x, &consts, format)?,
            Dims::Two => bound_2d(&ts, &h, &x, &consts, format)?,
        },
        _ => bound_multichannel(&ts, &h, &x, c.channel_sum, &consts, format)?,
    };
    let cond = if condition {
        if dims != Dims::One || h.channels() != 1 {
            return Err(Error::Shape("--condition needs a 1D single-channel problem".into()));
        }
        let r = condition_bound(&ts, &h, &x)?;
        if r.kappa.is_infinite() {
            return Err(Error::Numerical(format!("{}: {}", r.descriptor, r.diagnostic.unwrap_or_default())));
        }
        Some(r)
    } else {
        None
    };
    Ok(match c.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            if let Some(r) = &cond {
                v["condition"] = serde_json::to_value(r)?;
            }
            Output::json(serde_json::to_string_pretty(&v)?)
        }
        Format::Csv => {
            let mut s = String::from("output,componentwise_bound\n");
            for (i, b) in report.componentwise_bounds.iter().enumerate() {
                s.push_str(&format!("{i},{b:e}\n"));
            }
            Output::new(s)
        }
        Format::Text => {
            let k = &report.constants;
            let mut s = format!(
                "{}\n  dims {}, {} channel(s){}\n  alpha {} beta {} gamma {} lambda {} -> factor {}\n  epsilon {:e}\n  normwise bound       {:.3e}\n  max componentwise    {:.3e}\n",
                report.descriptor,
                report.dims.count(),
                report.channels,
                report.channel_sum.map(|s| format!(", {s} channel sum")).unwrap_or_default(),
                k.alpha,
                k.beta,
                k.gamma,
                report.lambda,
                report.factor,
                report.epsilon,
                report.normwise_bound,
                report.max_componentwise()
            );
            if let Some(r) = &cond {
                s.push_str(&format!("  kappa_2 {:.3e}, conditioning bound {:.3e}\n", r.kappa, r.bound));
            }
            Output::new(s)
        }
    })
}

fn table_cmd(c: &Common, which: TableId) -> Result<Output> {
    let t = reproduce_table(which, &TableOptions { trials: c.trials, seed: c.seed })?;
    Ok(match c.format {
        Format::Csv => Output::new(t.to_csv()),
        Format::Text => Output::new(t.to_text()),
        Format::Json => Output::json(serde_json::to_string_pretty(&t)?),
    })
}

fn run(cli: Cli) -> Result<()> {
    let c = &cli.common;
    if c.trials == 0 {
        return Err(Error::Size("--trials must be at least 1".into()));
    }
    let out = match &cli.command {
        Command::Gen { nh, no, points, chebyshev, modified } => {
            gen(*nh, *no, points.as_deref(), *chebyshev, *modified, c.format)?
        }
        Command::Convolve { matrix, kernel, input, running } => {
            convolve(c, matrix.as_deref(), kernel, input, *running)?
        }
        Command::Measure { matrix, direct, dims, channels, per_trial } => {
            measure_cmd(c, matrix.as_deref(), direct.as_deref(), *dims, *channels, *per_trial)?
        }
        Command::Search { n, dims, nh, curated, top } => search_cmd(c, *n, *dims, *nh, *curated, *top)?,
        Command::Bounds { matrix, dims, channels, kernel, input, condition } => {
            let tensors = kernel.as_deref().zip(input.as_deref());
            bounds_cmd(c, matrix, *dims, *channels, tensors, *condition)?
        }
        Command::Table { which } => table_cmd(c, *which)?,
    };
    out.emit(c.out.as_deref(), std::env::var_os("TOOMCOOK_OUT_DIR").map(PathBuf::from).as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("toomcook: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use toomcook::exact::format_points;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_aligns_fractions() {
        let m = Matrix::from_rows(vec![
            vec![Rational::new(1, 2).unwrap(), Rational::integer(-3)],
            vec![Rational::zero(), Rational::one()],
        ]);
        assert_eq!(grid(&m), "1/2  -3\n  0   1");
    }

    #[test]
    fn gen_rejects_inf_when_unmodified() {
        let e = gen(3, None, Some("0,1,-1,inf"), None, Modified::No, Format::Json).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(gen(3, None, Some("0,1,-1"), None, Modified::Yes, Format::Json).is_err());
        let ok = gen(3, None, Some("0,1,-1,inf"), None, Modified::Auto, Format::Text).unwrap();
        assert!(ok.text().starts_with("F(2,3)"));
    }

    #[test]
    fn default_outputs_follow_points() {
        let ts = build(3, 2, &parse_points("0,1,-1,inf").unwrap()).unwrap();
        assert_eq!(format_points(ts.points()), "0,1,-1,inf");
        assert!(matrix_csv(&ts).lines().count() == 1 + 2 * 4 + 4 * 3 + 4 * 4);
    }
}
