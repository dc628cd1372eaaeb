use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{build, Matrix, TransformSet};
use crate::error::{Error, Result};
use crate::exact::{FloatFormat, Point, Rational};

/// The triple rounded entrywise to one float format, stored widened to `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundedTriple {
    pub a_t: Matrix<f64>,
    pub g: Matrix<f64>,
    pub b_t: Matrix<f64>,
}

impl RoundedTriple {
    pub fn round(
        a_t: &Matrix<Rational>,
        g: &Matrix<Rational>,
        b_t: &Matrix<Rational>,
        format: FloatFormat,
    ) -> Result<Self> {
        Ok(RoundedTriple { a_t: a_t.round(format)?, g: g.round(format)?, b_t: b_t.round(format)? })
    }
}

/// On-disk form of a [`TransformSet`].
///
/// Exact entries are fraction strings; the `*_fp64` arrays are convenience
/// copies and are ignored on load. Loading rebuilds the set from `points` and
/// rejects the file if the stored exact matrices disagree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n_h: usize,
    pub n_o: usize,
    pub modified: bool,
    pub points: Vec<Point>,
    #[serde(rename = "A_T")]
    pub a_t: Vec<Vec<Rational>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<Rational>>,
    #[serde(rename = "B_T")]
    pub b_t: Vec<Vec<Rational>>,
    #[serde(rename = "A_T_fp64")]
    pub a_t_fp64: Vec<Vec<f64>>,
    #[serde(rename = "G_fp64")]
    pub g_fp64: Vec<Vec<f64>>,
    #[serde(rename = "B_T_fp64")]
    pub b_t_fp64: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_transform(ts: &TransformSet) -> Self {
        let r = ts.rounded(FloatFormat::Fp64);
        MatrixFile {
            n_h: ts.n_h(),
            n_o: ts.n_o(),
            modified: ts.modified(),
            points: ts.points().to_vec(),
            a_t: ts.a_t().to_rows(),
            g: ts.g().to_rows(),
            b_t: ts.b_t().to_rows(),
            a_t_fp64: r.a_t.to_rows(),
            g_fp64: r.g.to_rows(),
            b_t_fp64: r.b_t.to_rows(),
        }
    }

    pub fn to_transform(&self) -> Result<TransformSet> {
        let ts = build(self.n_h, self.n_o, &self.points)?;
        if ts.modified() != self.modified {
            return Err(Error::Mismatch("modified flag disagrees with points".into()));
        }
        for (name, stored, built) in
            [("A_T", &self.a_t, ts.a_t()), ("G", &self.g, ts.g()), ("B_T", &self.b_t, ts.b_t())]
        {
            if *stored != built.to_rows() {
                return Err(Error::Mismatch(format!(
                    "{name} does not match the matrix built from the stored points"
                )));
            }
        }
        Ok(ts)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<TransformSet> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)?.to_transform()
    }

    pub fn write(ts: &TransformSet, path: &Path) -> Result<()> {
        std::fs::write(path, Self::from_transform(ts).to_json()? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_points;

    #[test]
    fn roundtrip() {
        let ts = build(3, 2, &parse_points("0,1,-1,inf").unwrap()).unwrap();
        let json = MatrixFile::from_transform(&ts).to_json().unwrap();
        let back = MatrixFile::from_json(&json).unwrap().to_transform().unwrap();
        assert_eq!(back.a_t(), ts.a_t());
        assert_eq!(back.points(), ts.points());
        let keys: Vec<usize> = ["\"n_h\"", "\"n_o\"", "\"modified\"", "\"points\"", "\"A_T\"", "\"G\"", "\"B_T\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(json.contains("\"1/2\""));
        assert!(json.contains("\"inf\""));
    }

    #[test]
    fn tampered_file_is_rejected() {
        let ts = build(3, 2, &parse_points("0,1,-1,inf").unwrap()).unwrap();
        let mut file = MatrixFile::from_transform(&ts);
        file.g[0][0] = Rational::integer(5);
        assert!(matches!(file.to_transform(), Err(Error::Mismatch(_))));
    }
}
