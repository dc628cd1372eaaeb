use crate::exact::{FloatFormat, Rational};

/// Round an `f64` to the nearest value of `format`, ties to even.
///
/// fp32 arithmetic is emulated as an `f64` operation on fp32 operands
/// followed by this rounding. Since 53 >= 2*24 + 2 the double rounding is
/// innocuous for `+` and `*`, so results equal native fp32 arithmetic.
#[inline(always)]
pub fn round_to(v: f64, format: FloatFormat) -> f64 {
    match format {
        FloatFormat::Fp32 => v as f32 as f64,
        FloatFormat::Fp64 => v,
    }
}

/// A matrix coefficient rounded to both formats, with its representation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coef {
    value: [f64; 2],
    error: [f64; 2],
}

impl Coef {
    pub fn new(exact: &Rational) -> Self {
        let mut value = [0.0; 2];
        let mut error = [0.0; 2];
        for (k, fmt) in [FloatFormat::Fp32, FloatFormat::Fp64].into_iter().enumerate() {
            let v = exact.to_nearest(fmt).expect("transform entries fit in fp32");
            value[k] = v;
            let rounded = Rational::from_f64(v).expect("finite");
            error[k] = (&rounded - exact).abs().to_f64().expect("tiny");
        }
        Coef { value, error }
    }

    #[inline(always)]
    pub fn value(&self, format: FloatFormat) -> f64 {
        self.value[slot(format)]
    }

    /// `|rounded - exact|`.
    #[inline(always)]
    pub fn error(&self, format: FloatFormat) -> f64 {
        self.error[slot(format)]
    }
}

#[inline(always)]
fn slot(format: FloatFormat) -> usize {
    match format {
        FloatFormat::Fp32 => 0,
        FloatFormat::Fp64 => 1,
    }
}

/// Scalar type the convolution pipeline is generic over.
///
/// `f64` carries plain values; [`Tracked`] additionally carries a running
/// first-order bound on the distance to the exact result. Both produce
/// bitwise identical values.
pub trait Value: Copy + Send + Sync + 'static {
    /// An input value, exactly representable in the working format.
    fn input(v: f64) -> Self;
    fn zero() -> Self;
    fn value(self) -> f64;
    fn add(self, rhs: Self, format: FloatFormat) -> Self;
    fn mul(self, rhs: Self, format: FloatFormat) -> Self;
    fn scale(self, coef: &Coef, format: FloatFormat) -> Self;
    /// Conversion into `format`; exact when widening.
    fn convert(self, format: FloatFormat) -> Self;
}

impl Value for f64 {
    #[inline(always)]
    fn input(v: f64) -> Self {
        v
    }
    #[inline(always)]
    fn zero() -> Self {
        0.0
    }
    #[inline(always)]
    fn value(self) -> f64 {
        self
    }
    #[inline(always)]
    fn add(self, rhs: Self, format: FloatFormat) -> Self {
        round_to(self + rhs, format)
    }
    #[inline(always)]
    fn mul(self, rhs: Self, format: FloatFormat) -> Self {
        round_to(self * rhs, format)
    }
    #[inline(always)]
    fn scale(self, coef: &Coef, format: FloatFormat) -> Self {
        round_to(self * coef.value(format), format)
    }
    #[inline(always)]
    fn convert(self, format: FloatFormat) -> Self {
        round_to(self, format)
    }
}

/// A value together with a running bound on its error.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tracked {
    pub value: f64,
    pub bound: f64,
}

impl Value for Tracked {
    fn input(v: f64) -> Self {
        Tracked { value: v, bound: 0.0 }
    }
    fn zero() -> Self {
        Tracked::default()
    }
    fn value(self) -> f64 {
        self.value
    }
    fn add(self, rhs: Self, format: FloatFormat) -> Self {
        let value = round_to(self.value + rhs.value, format);
        Tracked { value, bound: self.bound + rhs.bound + format.unit_roundoff() * value.abs() }
    }
    fn mul(self, rhs: Self, format: FloatFormat) -> Self {
        let value = round_to(self.value * rhs.value, format);
        let bound = self.bound * rhs.value.abs()
            + rhs.bound * self.value.abs()
            + format.unit_roundoff() * value.abs();
        Tracked { value, bound }
    }
    fn scale(self, coef: &Coef, format: FloatFormat) -> Self {
        let c = coef.value(format);
        let value = round_to(self.value * c, format);
        let bound = self.bound * c.abs()
            + coef.error(format) * self.value.abs()
            + format.unit_roundoff() * value.abs();
        Tracked { value, bound }
    }
    fn convert(self, format: FloatFormat) -> Self {
        let value = round_to(self.value, format);
        let bound = if value == self.value {
            self.bound
        } else {
            self.bound + format.unit_roundoff() * self.value.abs()
        };
        Tracked { value, bound }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn emulated_fp32_matches_native(a in -1e6f32..1e6, b in -1e6f32..1e6) {
            prop_assert_eq!(round_to(a as f64 + b as f64, FloatFormat::Fp32), (a + b) as f64);
            prop_assert_eq!(round_to(a as f64 * b as f64, FloatFormat::Fp32), (a * b) as f64);
        }

        #[test]
        fn tracked_values_match_plain(a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let c = Coef::new(&Rational::new(1, 3).unwrap());
            for fmt in [FloatFormat::Fp32, FloatFormat::Fp64] {
                let (ta, tb) = (Tracked::input(a).convert(fmt), Tracked::input(b).convert(fmt));
                let (pa, pb) = (a.convert(fmt), b.convert(fmt));
                prop_assert_eq!(ta.add(tb, fmt).value, pa.add(pb, fmt));
                prop_assert_eq!(ta.mul(tb, fmt).value, pa.mul(pb, fmt));
                prop_assert_eq!(ta.scale(&c, fmt).value, pa.scale(&c, fmt));
            }
        }
    }

    #[test]
    fn coefficient_errors() {
        let half = Coef::new(&Rational::new(1, 2).unwrap());
        assert_eq!(half.value(FloatFormat::Fp32), 0.5);
        assert_eq!(half.error(FloatFormat::Fp32), 0.0);
        let third = Coef::new(&Rational::new(1, 3).unwrap());
        assert!(third.error(FloatFormat::Fp32) > 0.0);
        assert!(third.error(FloatFormat::Fp32) <= FloatFormat::Fp32.unit_roundoff() / 3.0);
        assert!(third.error(FloatFormat::Fp64) < third.error(FloatFormat::Fp32));
    }
}
