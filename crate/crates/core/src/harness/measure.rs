use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{conv, conv_direct_with, conv_tracked, ChannelSum, ConvConfig, Precision, Tensor};
use crate::error::{Error, Result};
use crate::matrix::{Dims, TransformSet};

/// What is being measured: a Toom-Cook triple or direct convolution.
#[derive(Clone, Copy, Debug)]
pub enum Algorithm<'a> {
    ToomCook(&'a TransformSet),
    Direct { n_h: usize, n_o: usize },
}

impl Algorithm<'_> {
    pub fn n_h(&self) -> usize {
        match self {
            Algorithm::ToomCook(ts) => ts.n_h(),
            Algorithm::Direct { n_h, .. } => *n_h,
        }
    }

    pub fn n_o(&self) -> usize {
        match self {
            Algorithm::ToomCook(ts) => ts.n_o(),
            Algorithm::Direct { n_o, .. } => *n_o,
        }
    }

    /// Input extent per dimension.
    pub fn input_size(&self) -> usize {
        self.n_h() + self.n_o() - 1
    }

    pub fn descriptor(&self) -> String {
        match self {
            Algorithm::ToomCook(ts) => ts.descriptor(),
            Algorithm::Direct { n_h, n_o } => format!("direct({n_o},{n_h})"),
        }
    }

    fn run(&self, h: &Tensor, x: &Tensor, cfg: &ConvConfig) -> Result<Tensor> {
        match self {
            Algorithm::ToomCook(ts) => conv(ts, h, x, cfg),
            Algorithm::Direct { .. } => conv_direct_with(h, x, cfg.precision, cfg.channel_sum),
        }
    }
}

/// Settings shared by every algorithm measured in one comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Experiment {
    pub dims: Dims,
    pub config: ConvConfig,
    pub channels: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Experiment {
    pub fn new(dims: Dims, config: ConvConfig, trials: usize, seed: u64) -> Self {
        Experiment { dims, config, channels: 1, trials, seed }
    }

    pub fn with_channels(mut self, channels: usize) -> Self {
        self.channels = channels;
        self
    }

    pub fn with_config(mut self, config: ConvConfig) -> Self {
        self.config = config;
        self
    }
}

/// Mean L1 error of one algorithm against the fp64 direct reference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub descriptor: String,
    pub dims: Dims,
    pub config: ConvConfig,
    pub channels: usize,
    pub trials: usize,
    pub seed: u64,
    pub n_o: usize,
    /// Mean over trials of the L1 norm of the whole output error.
    pub total_l1_mean: f64,
    /// `total_l1_mean / n_o^dims`.
    pub per_point_l1_mean: f64,
    /// Total L1 error of every trial, in trial order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_trial: Vec<f64>,
}

impl ErrorReport {
    pub fn without_trials(mut self) -> Self {
        self.per_trial.clear();
        self
    }
}

/// Random kernel and input for one trial, uniform on (-1, 1) in fp32.
///
/// The generator is keyed by `(seed, trial)`, so any trial can be
/// regenerated independently and every algorithm with the same sizes sees
/// the same inputs.
pub fn trial_inputs(seed: u64, trial: usize, dims: Dims, channels: usize, n_h: usize, n: usize) -> (Tensor, Tensor) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let dist = Uniform::new(-1.0f32, 1.0f32);
    let d = dims.count();
    let draw = |len: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..len)
            .map(|_| loop {
                let v = dist.sample(rng);
                if v != -1.0 {
                    break v as f64;
                }
            })
            .collect()
    };
    let h = draw(channels * n_h.pow(d), &mut rng);
    let x = draw(channels * n.pow(d), &mut rng);
    (
        Tensor::new(dims, channels, n_h, h).expect("sized above"),
        Tensor::new(dims, channels, n, x).expect("sized above"),
    )
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum()
}

fn reference(h: &Tensor, x: &Tensor) -> Result<Tensor> {
    conv_direct_with(h, x, Precision::Fp64, ChannelSum::Linear)
}

/// Measure `alg` over `exp.trials` random trials.
///
/// Trials run in parallel; per-trial errors are collected in trial order and
/// reduced sequentially, so the report does not depend on scheduling.
pub fn measure(alg: Algorithm<'_>, exp: &Experiment) -> Result<ErrorReport> {
    if exp.trials == 0 {
        return Err(Error::Size("trials must be at least 1".into()));
    }
    if exp.channels == 0 {
        return Err(Error::Size("channels must be at least 1".into()));
    }
    let per_trial = (0..exp.trials)
        .into_par_iter()
        .map(|t| {
            let (h, x) = trial_inputs(exp.seed, t, exp.dims, exp.channels, alg.n_h(), alg.input_size());
            let got = alg.run(&h, &x, &exp.config)?;
            let want = reference(&h, &x)?;
            Ok(l1(got.data(), want.data()))
        })
        .collect::<Result<Vec<f64>>>()?;
    let total = per_trial.iter().sum::<f64>() / exp.trials as f64;
    let points = alg.n_o().pow(exp.dims.count()) as f64;
    Ok(ErrorReport {
        descriptor: alg.descriptor(),
        dims: exp.dims,
        config: exp.config,
        channels: exp.channels,
        trials: exp.trials,
        seed: exp.seed,
        n_o: alg.n_o(),
        total_l1_mean: total,
        per_point_l1_mean: total / points,
        per_trial,
    })
}

/// Single-channel Toom-Cook measurement.
pub fn measure_error(ts: &TransformSet, dims: Dims, cfg: ConvConfig, trials: usize, seed: u64) -> Result<ErrorReport> {
    measure(Algorithm::ToomCook(ts), &Experiment::new(dims, cfg, trials, seed))
}

/// Ratio of two reports' per-point means with a paired bootstrap interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub numerator: String,
    pub denominator: String,
    pub ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Comparison {
    /// The interval contains 1, so the two cannot be ordered at 95%.
    pub fn is_tie(&self) -> bool {
        self.ci_low <= 1.0 && 1.0 <= self.ci_high
    }
}

const BOOTSTRAP_RESAMPLES: usize = 1000;
const BOOTSTRAP_SEED: u64 = 0x5eed;

/// `a / b` on per-point means.
///
/// Both reports must come from the same experiment (dims, channel count,
/// trial count, seed and output size) so that trial `i` of each saw the same
/// inputs; the bootstrap resamples trial indices jointly.
pub fn compare_reports(a: &ErrorReport, b: &ErrorReport) -> Result<Comparison> {
    if a.dims != b.dims || a.channels != b.channels || a.trials != b.trials || a.seed != b.seed || a.n_o != b.n_o {
        return Err(Error::Mismatch(format!(
            "{} and {} were not measured on the same inputs",
            a.descriptor, b.descriptor
        )));
    }
    let ratio = a.per_point_l1_mean / b.per_point_l1_mean;
    let (ci_low, ci_high) = if a.per_trial.len() == a.trials && b.per_trial.len() == b.trials {
        bootstrap_ratio(&a.per_trial, &b.per_trial)
    } else {
        (ratio, ratio)
    };
    Ok(Comparison {
        numerator: a.descriptor.clone(),
        denominator: b.descriptor.clone(),
        ratio,
        ci_low,
        ci_high,
    })
}

fn bootstrap_ratio(a: &[f64], b: &[f64]) -> (f64, f64) {
    let len = a.len();
    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let mut ratios: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let (mut sa, mut sb) = (0.0, 0.0);
            for _ in 0..len {
                let i = rng.gen_range(0..len);
                sa += a[i];
                sb += b[i];
            }
            sa / sb
        })
        .collect();
    ratios.sort_by(f64::total_cmp);
    let at = |q: f64| ratios[((q * (BOOTSTRAP_RESAMPLES - 1) as f64).round()) as usize];
    (at(0.025), at(0.975))
}

/// Running-error study: how often and how tightly the running bound covers
/// the actual error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunningErrorStudy {
    pub descriptor: String,
    pub trials: usize,
    /// Fraction of trials in which the bound covers the error at every output.
    pub covered_fraction: f64,
    pub mean_bound: f64,
    pub mean_actual: f64,
    /// `mean_bound / mean_actual`, both as per-point L1 means.
    pub ratio: f64,
}

pub fn running_error_study(ts: &TransformSet, exp: &Experiment) -> Result<RunningErrorStudy> {
    let rows = (0..exp.trials)
        .into_par_iter()
        .map(|t| {
            let (h, x) = trial_inputs(exp.seed, t, exp.dims, exp.channels, ts.n_h(), ts.n());
            let (got, bounds) = conv_tracked(ts, &h, &x, &exp.config)?;
            let want = reference(&h, &x)?;
            let errs: Vec<f64> = got.data().iter().zip(want.data()).map(|(a, b)| (a - b).abs()).collect();
            let covered = errs.iter().zip(&bounds).all(|(e, b)| e <= b);
            Ok((covered, bounds.iter().sum::<f64>(), errs.iter().sum::<f64>()))
        })
        .collect::<Result<Vec<(bool, f64, f64)>>>()?;
    let n = exp.trials as f64;
    let points = ts.n_o().pow(exp.dims.count()) as f64;
    let covered = rows.iter().filter(|r| r.0).count() as f64 / n;
    let mean_bound = rows.iter().map(|r| r.1).sum::<f64>() / n / points;
    let mean_actual = rows.iter().map(|r| r.2).sum::<f64>() / n / points;
    Ok(RunningErrorStudy {
        descriptor: ts.descriptor(),
        trials: exp.trials,
        covered_fraction: covered,
        mean_bound,
        mean_actual,
        ratio: mean_bound / mean_actual,
    })
}
