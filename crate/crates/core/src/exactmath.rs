//! Exact integer and rational arithmetic: binomial coefficients with the
//! vanishing convention, dense univariate polynomials over the rationals,
//! and integer-tail negativity certificates.
//!
//! Binomial convention: `C(a, b) = 0` whenever `a < b` or `b < 0`, including
//! negative `a`. This is the convention under which every alternating sum in
//! the crate terminates.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C(top, bottom)`, zero whenever `top < bottom` or `bottom < 0`.
pub fn binom(top: i64, bottom: i64) -> BigInt {
    if bottom < 0 || top < bottom {
        return BigInt::zero();
    }
    let k = bottom.min(top - bottom);
    let mut acc = BigInt::one();
    // acc stays integral: after step i it equals C(top - k + i, i).
    for i in 1..=k {
        acc *= top - k + i;
        acc /= i;
    }
    acc
}

/// `max(m, 0)`.
pub fn pos_part(m: i64) -> i64 {
    m.max(0)
}

/// Big-integer variant of [`pos_part`].
pub fn pos_part_big(m: &BigInt) -> BigInt {
    if m.is_negative() {
        BigInt::zero()
    } else {
        m.clone()
    }
}

/// Dense univariate polynomial with exact rational coefficients, constant
/// term first. Trailing zero coefficients are never stored, so the leading
/// coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPolynomial {
    coefficients: Vec<BigRational>,
    variable: String,
}

impl IntPolynomial {
    pub fn new(coefficients: Vec<BigRational>, variable: impl Into<String>) -> Self {
        let mut p = Self {
            coefficients,
            variable: variable.into(),
        };
        p.trim();
        p
    }

    pub fn zero(variable: impl Into<String>) -> Self {
        Self::new(Vec::new(), variable)
    }

    pub fn constant(c: BigRational, variable: impl Into<String>) -> Self {
        Self::new(vec![c], variable)
    }

    pub fn from_integers<I, T>(coefficients: I, variable: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::new(
            coefficients
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
            variable,
        )
    }

    /// The linear polynomial `a*x + b`.
    pub fn linear(a: i64, b: i64, variable: impl Into<String>) -> Self {
        Self::from_integers([b, a], variable)
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(Zero::is_zero) {
            self.coefficients.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, power: usize) -> BigRational {
        self.coefficients
            .get(power)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.coefficients
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn with_variable(mut self, variable: impl Into<String>) -> Self {
        self.variable = variable.into();
        self
    }

    /// Horner evaluation at an exact rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(x.clone()))
    }

    pub fn eval_i64(&self, x: i64) -> BigRational {
        self.eval_int(&BigInt::from(x))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(
            self.coefficients.iter().map(|c| c * factor).collect(),
            self.variable.clone(),
        )
    }

    /// Coefficients of `factor * self`, constant term first, if they are all
    /// integers.
    pub fn scaled_integer_coefficients(&self, factor: &BigInt) -> Option<Vec<BigInt>> {
        let f = BigRational::from_integer(factor.clone());
        self.coefficients
            .iter()
            .map(|c| {
                let v = c * &f;
                v.is_integer().then(|| v.to_integer())
            })
            .collect()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coefficients.len().max(rhs.coefficients.len());
        let coeffs = (0..len)
            .map(|k| self.coefficient(k) + rhs.coefficient(k))
            .collect();
        IntPolynomial::new(coeffs, self.variable.clone())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(
            self.coefficients.iter().map(|c| -c).collect(),
            self.variable.clone(),
        )
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero(self.variable.clone());
        }
        let mut out = vec![BigRational::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out, self.variable.clone())
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

impl fmt::Display for IntPolynomial {
    /// Descending powers, e.g. `(-543200287/2520)*e^7 + ... + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff = fmt_rational(c);
            match power {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}*{}", self.variable)?,
                _ => write!(f, "{coeff}*{}^{power}", self.variable)?,
            }
        }
        Ok(())
    }
}

/// The polynomial `(a x + b)(a x + b - 1)...(a x + b - m + 1) / m!`.
///
/// Agrees with `binom(a*e + b, m)` at every integer `e` with `a*e + b >= 0`.
/// For `a*e + b < 0` the polynomial is generally nonzero while the binomial
/// convention gives zero; callers evaluating outside that range must check.
pub fn binom_poly(a: i64, b: i64, m: u32) -> IntPolynomial {
    let mut acc = IntPolynomial::constant(BigRational::one(), "x");
    for i in 0..i64::from(m) {
        acc = &acc * &IntPolynomial::linear(a, b - i, "x");
    }
    let factorial: BigInt = (1..=i64::from(m)).map(BigInt::from).product();
    acc.scale(&BigRational::new(BigInt::one(), factorial))
}

/// Cauchy bound: an integer `B >= 1 + max_k |c_k / c_lead|`, so every real
/// root `x` satisfies `|x| <= B`. Constants return 1.
pub fn root_bound(p: &IntPolynomial) -> Result<BigInt> {
    let lead = p.coefficients.last().ok_or(Error::ZeroPolynomial)?;
    let max_ratio = p.coefficients[..p.coefficients.len() - 1]
        .iter()
        .map(|c| (c / lead).abs())
        .max()
        .unwrap_or_else(BigRational::zero);
    Ok((max_ratio + BigRational::one()).ceil().to_integer().max(BigInt::one()))
}

/// Evidence that a polynomial is negative at every integer `e >= from_value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativityCertificate {
    pub polynomial: IntPolynomial,
    pub from_value: i64,
    pub root_bound: BigInt,
    pub checked_points: Vec<i64>,
    pub verdict: bool,
}

/// Certifies `p(e) < 0` for all integers `e >= e0`.
///
/// The certificate holds iff the leading coefficient is negative and
/// `p(e) < 0` for every integer in `[e0, root_bound(p)]`. Beyond the root
/// bound `p` has no roots, so its sign is that of the leading coefficient.
pub fn verify_negative_from(p: &IntPolynomial, e0: i64) -> Result<NegativityCertificate> {
    let bound = root_bound(p)?;
    let mut cert = NegativityCertificate {
        polynomial: p.clone(),
        from_value: e0,
        root_bound: bound.clone(),
        checked_points: Vec::new(),
        verdict: false,
    };
    if !p.leading_coefficient().is_negative() {
        return Ok(cert);
    }
    let upper = bound.to_i64().ok_or_else(|| {
        Error::InvalidParameter(format!("root bound {bound} too large to scan"))
    })?;
    for e in e0..=upper.max(e0) {
        cert.checked_points.push(e);
        if !p.eval_i64(e).is_negative() {
            return Ok(cert);
        }
    }
    cert.verdict = true;
    Ok(cert)
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=u64::from(n)).map(BigInt::from).product()
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factorial_ratio(top: u64, bottom: u64) -> BigInt {
        // Independent of `binom`: full factorials, one division.
        let f = |n: u64| (1..=n).map(BigInt::from).product::<BigInt>();
        f(top) / (f(bottom) * f(top - bottom))
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(2, 3), BigInt::zero());
        assert_eq!(binom(-4, 2), BigInt::zero());
        assert_eq!(binom(4, -1), BigInt::zero());
        assert_eq!(binom(18, 9), factorial_ratio(18, 9));
        assert_eq!(binom(18, 9), BigInt::from(48620));
        assert_eq!(binom(0, 0), BigInt::one());
    }

    #[test]
    fn pos_part_examples() {
        assert_eq!(pos_part(7), 7);
        assert_eq!(pos_part(-3), 0);
        assert_eq!(pos_part(0), 0);
    }

    #[test]
    fn binom_poly_examples() {
        assert_eq!(binom_poly(1, 1, 1), IntPolynomial::from_integers([1, 1], "x"));
        let p = binom_poly(31, 7, 7);
        assert_eq!(p.eval_i64(1), BigRational::from_integer(factorial_ratio(38, 7)));
        assert_eq!(factorial_ratio(38, 7), BigInt::from(12_620_256));
        assert!(binom_poly(3, 3, 7).eval_i64(0).is_zero());
    }

    #[test]
    fn binom_poly_diverges_for_negative_tops() {
        // C(-1, 2) is 0 by convention, the product form gives 1.
        let p = binom_poly(1, -1, 2);
        assert_eq!(p.eval_i64(0), BigRational::one());
        assert!(binom(-1, 2).is_zero());
    }

    #[test]
    fn root_bound_examples() {
        assert_eq!(
            root_bound(&IntPolynomial::from_integers([-10, 1], "x")).unwrap(),
            BigInt::from(11)
        );
        assert_eq!(
            root_bound(&IntPolynomial::from_integers([-5], "x")).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            root_bound(&IntPolynomial::from_integers([-4, 0, 1], "x")).unwrap(),
            BigInt::from(5)
        );
        assert_eq!(
            root_bound(&IntPolynomial::zero("x")),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn negativity_examples() {
        let c = verify_negative_from(&IntPolynomial::from_integers([-1], "x"), 0).unwrap();
        assert!(c.verdict);
        let c = verify_negative_from(&IntPolynomial::from_integers([-10, 1], "x"), 0).unwrap();
        assert!(!c.verdict);
        assert!(verify_negative_from(&IntPolynomial::zero("x"), 0).is_err());
        // Negative leading coefficient but a positive value inside the scan.
        let c = verify_negative_from(&IntPolynomial::from_integers([-4, 5, -1], "x"), 0).unwrap();
        assert!(!c.verdict);
    }

    #[test]
    fn display_descending() {
        let p = IntPolynomial::new(
            vec![
                BigRational::one(),
                BigRational::zero(),
                BigRational::new((-3).into(), 2.into()),
            ],
            "e",
        );
        assert_eq!(p.to_string(), "(-3/2)*e^2 + 1");
        assert_eq!(IntPolynomial::zero("t").to_string(), "0");
        assert_eq!(IntPolynomial::from_integers([0, -5], "e").to_string(), "-5*e");
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = IntPolynomial::from_integers([1, 2, 0, 0], "x");
        assert_eq!(p.degree(), Some(1));
        assert_eq!(IntPolynomial::from_integers([0, 0], "x").degree(), None);
    }

    proptest! {
        #[test]
        fn binom_symmetry(a in 0i64..80, b in 0i64..80) {
            prop_assume!(b <= a);
            prop_assert_eq!(binom(a, b), binom(a, a - b));
        }

        #[test]
        fn binom_pascal(a in 1i64..80, b in 1i64..80) {
            prop_assert_eq!(binom(a, b), binom(a - 1, b) + binom(a - 1, b - 1));
        }

        #[test]
        fn binom_poly_agrees_on_nonnegative_tops(a in -5i64..40, b in -20i64..40, m in 0u32..9, e in 0i64..12) {
            prop_assume!(a * e + b >= 0);
            let p = binom_poly(a, b, m);
            prop_assert_eq!(p.eval_i64(e), BigRational::from_integer(binom(a * e + b, i64::from(m))));
        }

        #[test]
        fn certificate_implies_negative_tail(
            coeffs in proptest::collection::vec(-50i64..50, 1..6),
            lead in -40i64..-1,
            e0 in 0i64..5,
            samples in proptest::collection::vec(0i64..100_000, 100),
        ) {
            let mut all = coeffs;
            all.push(lead);
            let p = IntPolynomial::from_integers(all, "x");
            let cert = verify_negative_from(&p, e0).unwrap();
            if cert.verdict {
                for s in samples {
                    prop_assert!(p.eval_i64(e0 + s).is_negative());
                }
            }
        }

        #[test]
        fn root_bound_dominates_roots(r1 in -30i64..30, r2 in -30i64..30, r3 in -30i64..30) {
            // (x - r1)(x - r2)(x - r3)
            let p = [r1, r2, r3].iter().fold(
                IntPolynomial::from_integers([1], "x"),
                |acc, r| &acc * &IntPolynomial::from_integers([-r, 1], "x"),
            );
            let b = root_bound(&p).unwrap();
            for r in [r1, r2, r3] {
                prop_assert!(BigInt::from(r.abs()) <= b);
            }
        }
    }
}
