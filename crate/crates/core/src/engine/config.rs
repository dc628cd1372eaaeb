use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::FloatFormat;

/// Arithmetic precision of a convolution run.
///
/// `Mixed` performs the kernel, input and output transforms in fp64 and the
/// Hadamard product and channel summation in fp32.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Fp32,
    Fp64,
    Mixed,
}

impl Precision {
    pub fn transform_format(self) -> FloatFormat {
        match self {
            Precision::Fp32 => FloatFormat::Fp32,
            Precision::Fp64 | Precision::Mixed => FloatFormat::Fp64,
        }
    }

    /// Format of the Hadamard product, the channel sum and the final output.
    pub fn inner_format(self) -> FloatFormat {
        match self {
            Precision::Fp64 => FloatFormat::Fp64,
            Precision::Fp32 | Precision::Mixed => FloatFormat::Fp32,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DotOrder {
    Linear,
    #[default]
    Huffman,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelSum {
    #[default]
    Linear,
    Pairwise,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvConfig {
    pub precision: Precision,
    pub dot_order: DotOrder,
    pub channel_sum: ChannelSum,
}

impl ConvConfig {
    pub fn new(precision: Precision, dot_order: DotOrder, channel_sum: ChannelSum) -> Self {
        ConvConfig { precision, dot_order, channel_sum }
    }
}

macro_rules! string_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self, Error> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name => Ok($ty::$variant),)+
                    other => Err(Error::Parse(format!(
                        concat!("unknown ", stringify!($ty), " {:?}; expected one of: ", $($name, " "),+),
                        other
                    ))),
                }
            }
        }
    };
}

string_enum!(Precision { Fp32 => "fp32", Fp64 => "fp64", Mixed => "mixed" });
string_enum!(DotOrder { Linear => "linear", Huffman => "huffman" });
string_enum!(ChannelSum { Linear => "linear", Pairwise => "pairwise" });

impl fmt::Display for ConvConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.precision, self.dot_order, self.channel_sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for p in [Precision::Fp32, Precision::Fp64, Precision::Mixed] {
            assert_eq!(p.to_string().parse::<Precision>().unwrap(), p);
        }
        assert_eq!("Huffman".parse::<DotOrder>().unwrap(), DotOrder::Huffman);
        assert_eq!("pairwise".parse::<ChannelSum>().unwrap(), ChannelSum::Pairwise);
        assert!("fp16".parse::<Precision>().is_err());
        let cfg = ConvConfig::default();
        assert_eq!(cfg.to_string(), "fp32/huffman/linear");
        assert_eq!(serde_json::to_string(&Precision::Mixed).unwrap(), "\"mixed\"");
    }

    #[test]
    fn mixed_boundaries() {
        assert_eq!(Precision::Mixed.transform_format(), FloatFormat::Fp64);
        assert_eq!(Precision::Mixed.inner_format(), FloatFormat::Fp32);
    }
}
