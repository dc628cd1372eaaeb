use super::Rational;

/// Dense polynomial in one variable; `coeffs[k]` multiplies `a^k`.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::new(vec![Rational::one()])
    }

    /// The monic linear factor `a - root`.
    pub fn linear(root: &Rational) -> Self {
        Polynomial::new(vec![-root, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `a^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(out)
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| &(&acc * at) + c)
    }
}

/// Exact product of a nonempty list of polynomials.
pub fn poly_product(factors: &[Polynomial]) -> Polynomial {
    assert!(!factors.is_empty(), "poly_product needs at least one factor");
    factors[1..]
        .iter()
        .fold(factors[0].clone(), |acc, f| acc.mul(f))
}

/// `(a - r_1)(a - r_2)...`; the empty product is 1.
pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Polynomial {
    roots
        .into_iter()
        .fold(Polynomial::one(), |acc, r| acc.mul(&Polynomial::linear(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn coeff_strings(p: &Polynomial) -> Vec<String> {
        p.coeffs().iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn product_examples() {
        let p = poly_product(&[Polynomial::linear(&r("1")), Polynomial::linear(&r("-1"))]);
        assert_eq!(coeff_strings(&p), ["-1", "0", "1"]);
        let p = poly_product(&[Polynomial::linear(&r("0"))]);
        assert_eq!(coeff_strings(&p), ["0", "1"]);
        let roots = ["1", "-1", "1/2", "-1/2"].map(r);
        let factors: Vec<_> = roots.iter().map(Polynomial::linear).collect();
        let p = poly_product(&factors);
        // (a^2 - 1)(a^2 - 1/4) = a^4 - 5/4 a^2 + 1/4
        assert_eq!(coeff_strings(&p), ["1/4", "0", "-5/4", "0", "1"]);
        assert_eq!(p, from_roots(roots.iter()));
    }

    #[test]
    fn zero_polynomial() {
        let z = Polynomial::new(vec![Rational::zero(), Rational::zero()]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert!(z.mul(&Polynomial::linear(&r("3"))).is_zero());
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-20i64..20, 1i64..6), 1..5).prop_map(|cs| {
            Polynomial::new(cs.into_iter().map(|(n, d)| Rational::new(n, d).unwrap()).collect())
        })
    }

    proptest! {
        #[test]
        fn product_degree_and_evaluation(fs in prop::collection::vec(arb_poly(), 1..4),
                                         pts in prop::collection::vec((-50i64..50, 1i64..9), 10)) {
            prop_assume!(fs.iter().all(|f| !f.is_zero()));
            let p = poly_product(&fs);
            let deg: usize = fs.iter().map(|f| f.degree().unwrap()).sum();
            prop_assert_eq!(p.degree(), Some(deg));
            for (n, d) in pts {
                let at = Rational::new(n, d).unwrap();
                let expect = fs.iter().fold(Rational::one(), |acc, f| &acc * &f.eval(&at));
                prop_assert_eq!(p.eval(&at), expect);
            }
        }
    }
}
