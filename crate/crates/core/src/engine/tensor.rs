use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Dims;

/// Channel-major values of shape `C x n` (1D) or `C x n x n` (2D, row-major).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    dims: Dims,
    channels: usize,
    size: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(dims: Dims, channels: usize, size: usize, data: Vec<f64>) -> Result<Self> {
        let t = Tensor { dims, channels, size, data };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if self.channels == 0 || self.size == 0 {
            return Err(Error::Shape("tensor needs at least one channel and one element".into()));
        }
        let expected = self.channels * self.size.pow(self.dims.count());
        if self.data.len() != expected {
            return Err(Error::Shape(format!(
                "{} values given for {} channel(s) of size {} in {}D",
                self.data.len(),
                self.channels,
                self.size,
                self.dims.count()
            )));
        }
        Ok(())
    }

    pub fn zeros(dims: Dims, channels: usize, size: usize) -> Self {
        let len = channels * size.pow(dims.count());
        Tensor { dims, channels, size, data: vec![0.0; len] }
    }

    pub fn vector(values: Vec<f64>) -> Self {
        let size = values.len();
        Tensor { dims: Dims::One, channels: 1, size, data: values }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Extent along each spatial dimension.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Values per channel.
    pub fn channel_len(&self) -> usize {
        self.size.pow(self.dims.count())
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let len = self.channel_len();
        &self.data[c * len..(c + 1) * len]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: Tensor = serde_json::from_str(s)?;
        t.validate()?;
        Ok(t)
    }

    /// Flat CSV: a `dims,channels,size` header line and its values, then one
    /// line per channel (1D) or per channel row (2D).
    pub fn to_csv(&self) -> String {
        let mut out = format!("dims,channels,size\n{},{},{}\n", self.dims.count(), self.channels, self.size);
        for line in self.data.chunks(self.size) {
            let cells: Vec<String> = line.iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty tensor CSV".into()))?;
        if header.replace(' ', "") != "dims,channels,size" {
            return Err(Error::Parse(format!("expected header dims,channels,size, got {header:?}")));
        }
        let shape_line = lines.next().ok_or_else(|| Error::Parse("missing tensor shape line".into()))?;
        let shape: Vec<usize> = shape_line
            .split(',')
            .map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("bad shape value {v:?}"))))
            .collect::<Result<_>>()?;
        let [d, channels, size] = shape[..] else {
            return Err(Error::Parse(format!("shape line needs 3 values, got {shape_line:?}")));
        };
        let dims = Dims::from_count(d as u32).ok_or_else(|| Error::Parse(format!("dims must be 1 or 2, got {d}")))?;
        let mut data = Vec::new();
        for line in lines {
            for cell in line.split(',') {
                data.push(cell.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad value {cell:?}")))?);
            }
        }
        Tensor::new(dims, channels, size, data)
    }
}
