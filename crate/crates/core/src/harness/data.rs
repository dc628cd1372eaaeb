use crate::error::{Error, Result};
use crate::exact::{parse_points, Point};
use crate::matrix::Dims;

const POINT_SETS: &str = include_str!("../../data/point_sets.txt");

/// Which curated collection a set comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Curated {
    /// Chosen for fp32 execution.
    Fp32,
    /// Chosen for fp64 transforms with fp32 Hadamard products.
    Mixed,
}

impl Curated {
    fn table(self) -> u32 {
        match self {
            Curated::Fp32 => 2,
            Curated::Mixed => 3,
        }
    }
}

/// Curated point set with `n` points, for kernel size 3.
pub fn curated_points(which: Curated, dims: Dims, n: usize) -> Result<Vec<Point>> {
    for line in POINT_SETS.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [table, d, size, points] = fields[..] else {
            return Err(Error::Parse(format!("bad point-set line {line:?}")));
        };
        let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
        if parse(table)? == which.table() as usize && parse(d)? == dims.count() as usize && parse(size)? == n {
            return parse_points(points);
        }
    }
    Err(Error::Size(format!("no curated {}D set with {n} points", dims.count())))
}

/// Range of `n` covered by the curated sets.
pub const CURATED_SIZES: std::ops::RangeInclusive<usize> = 4..=18;
