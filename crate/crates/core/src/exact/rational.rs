//! Exact rational numbers backed by arbitrary-precision integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Binary floating-point target formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FloatFormat {
    Fp32,
    Fp64,
}

impl FloatFormat {
    /// Significand width including the hidden bit.
    pub fn precision_bits(self) -> u64 {
        match self {
            FloatFormat::Fp32 => 24,
            FloatFormat::Fp64 => 53,
        }
    }

    fn min_normal_exp(self) -> i64 {
        match self {
            FloatFormat::Fp32 => -126,
            FloatFormat::Fp64 => -1022,
        }
    }

    fn max_exp(self) -> i64 {
        match self {
            FloatFormat::Fp32 => 127,
            FloatFormat::Fp64 => 1023,
        }
    }

    /// Unit roundoff 2^-p.
    pub fn unit_roundoff(self) -> f64 {
        match self {
            FloatFormat::Fp32 => f64::powi(2.0, -24),
            FloatFormat::Fp64 => f64::powi(2.0, -53),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FloatFormat::Fp32 => "fp32",
            FloatFormat::Fp64 => "fp64",
        }
    }
}

/// Arithmetic operator selector for [`rational_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact fraction in canonical form (positive denominator, reduced).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

pub fn rational_arith(op: ArithOp, a: &Rational, b: &Rational) -> Result<Rational> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn integer(v: i64) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// True when the value is `±2^k` for some integer `k`.
    pub fn is_power_of_two(&self) -> bool {
        let is_pow2 = |v: &BigInt| {
            let m = v.magnitude();
            !m.is_zero() && m.count_ones() == 1
        };
        is_pow2(self.numer()) && is_pow2(self.denom())
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite float {v}")));
        }
        if v == 0.0 {
            return Ok(Rational::zero());
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let mut numer = BigInt::from(mant);
        let mut denom = BigInt::one();
        if exp >= 0 {
            numer <<= exp as usize;
        } else {
            denom <<= (-exp) as usize;
        }
        if negative {
            numer = -numer;
        }
        Rational::from_big(numer, denom)
    }

    pub fn from_f32(v: f32) -> Result<Self> {
        Rational::from_f64(v as f64)
    }

    /// Round to the nearest representable value (ties to even).
    ///
    /// Returns the result widened to `f64`; for `Fp32` the value is exactly
    /// representable as an `f32`.
    pub fn to_nearest(&self, format: FloatFormat) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let p = format.precision_bits() as i64;
        let negative = self.is_negative();
        let n = self.numer().magnitude().clone();
        let d = self.denom().magnitude().clone();
        let e = n.bits() as i64 - d.bits() as i64;
        // Scale so the truncated quotient carries p+1 or p+2 bits.
        let shift = p + 2 - e;
        let (num, den) = if shift >= 0 {
            (n << shift as usize, d)
        } else {
            (n, d << (-shift) as usize)
        };
        let q = &num / &den;
        let sticky = !(&num % &den).is_zero();
        let len = q.bits() as i64;
        let exponent = len - 1 - shift;
        let drop = if exponent >= format.min_normal_exp() {
            len - p
        } else {
            format.min_normal_exp() - p + 1 + shift
        };
        debug_assert!(drop > 0);
        let mut mant = &q >> drop as usize;
        let rem = &q - (&mant << drop as usize);
        let half = num_bigint::BigUint::one() << (drop - 1) as usize;
        let odd = mant.bit(0);
        let round_up = match rem.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Equal => sticky || odd,
            Ordering::Less => false,
        };
        if round_up {
            mant += 1u32;
        }
        let scale = drop - shift;
        let top = mant.bits() as i64 + scale - 1;
        if !mant.is_zero() && top > format.max_exp() {
            return Err(Error::Overflow(self.to_string(), format.name()));
        }
        let m = mant.to_u64().expect("rounded significand fits in 64 bits");
        let magnitude = scale_by_pow2(m as f64, scale);
        let out = if negative { -magnitude } else { magnitude };
        if format == FloatFormat::Fp32 {
            debug_assert_eq!(out as f32 as f64, out);
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> Result<f64> {
        self.to_nearest(FloatFormat::Fp64)
    }

    pub fn to_f32(&self) -> Result<f32> {
        self.to_nearest(FloatFormat::Fp32).map(|v| v as f32)
    }

    /// True when the value is exactly representable in the given format.
    pub fn is_representable(&self, format: FloatFormat) -> bool {
        match self.to_nearest(format) {
            Ok(v) => Rational::from_f64(v).map(|r| &r == self).unwrap_or(false),
            Err(_) => false,
        }
    }
}

fn pow2(e: i64) -> f64 {
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074))
    }
}

/// Exact `m * 2^e` for an integer-valued `m < 2^54` whose product is representable.
fn scale_by_pow2(m: f64, e: i64) -> f64 {
    if e < -1000 {
        m * pow2(-1000) * pow2(e + 1000)
    } else if e > 1000 {
        m * pow2(1000) * pow2(e - 1000)
    } else {
        m * pow2(e)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace('\u{2212}', "-");
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let parse_int = |v: &str| -> Result<BigInt> {
            let v = v.trim();
            if v.is_empty() || v.starts_with('+') && v.len() == 1 {
                return Err(bad());
            }
            v.parse::<BigInt>().map_err(|_| bad())
        };
        match t.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.sign() == Sign::Minus {
                    return Err(bad());
                }
                Rational::from_big(parse_int(n)?, d)
            }
            None => Ok(Rational(BigRational::from_integer(parse_int(&t)?))),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::integer(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}
