use serde::{Deserialize, Serialize};

use crate::exact::Rational;

/// Spatial dimensionality of a convolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Dims {
    One,
    Two,
}

impl From<Dims> for u32 {
    fn from(d: Dims) -> u32 {
        d.count()
    }
}

impl TryFrom<u32> for Dims {
    type Error = String;
    fn try_from(d: u32) -> std::result::Result<Self, String> {
        Dims::from_count(d).ok_or_else(|| format!("dims must be 1 or 2, got {d}"))
    }
}

impl Dims {
    pub fn count(self) -> u32 {
        match self {
            Dims::One => 1,
            Dims::Two => 2,
        }
    }

    pub fn from_count(d: u32) -> Option<Self> {
        match d {
            1 => Some(Dims::One),
            2 => Some(Dims::Two),
            _ => None,
        }
    }
}

/// General (Hadamard-stage) multiplications for one Toom-Cook tile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultCount {
    pub n_h: usize,
    pub n_o: usize,
    pub dims: Dims,
    pub general_mults: u64,
    pub mults_per_output: Rational,
}

pub fn mult_count(n_h: usize, n_o: usize, dims: Dims) -> MultCount {
    assert!(n_h >= 1 && n_o >= 1, "mult_count needs n_h, n_o >= 1");
    let n = (n_h + n_o - 1) as u64;
    let d = dims.count();
    let general = n.pow(d);
    let outputs = (n_o as u64).pow(d);
    MultCount {
        n_h,
        n_o,
        dims,
        general_mults: general,
        mults_per_output: Rational::new(general as i64, outputs as i64).expect("n_o >= 1"),
    }
}
