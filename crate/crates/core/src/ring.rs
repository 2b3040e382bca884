//! Exact arithmetic in the contraction parameter `j`.
//!
//! A [`ContractionScalar`] is a polynomial in `j` with exact complex-rational
//! coefficients. The full grading is kept through every operation; the
//! choice between `j = 1`, the nilpotent unit `j = ι` (`ι² = 0`) and a small
//! real `j = ε` is made only when a value is reduced with [`JMode`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact complex number with rational real and imaginary parts.
pub type ComplexRational = Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("negative j-degree {0}")]
    NegativeDegree(i64),
    /// Division of a quantity with a nonzero `j⁰` part by `j`.
    #[error("division by the contraction parameter is undefined: degree-0 coefficient is {0}")]
    DivisionUndefined(String),
    #[error("invalid contraction mode: {0}")]
    InvalidMode(String),
}

/// Value of the contraction parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum JMode {
    /// `j = 1`: the ordinary SU(2) theory.
    One,
    /// `j = ι`, `ι² = 0`: the contracted theory.
    Nilpotent,
    /// `j = ε`, a real number, for numeric limit studies.
    Numeric(f64),
}

impl JMode {
    /// Builds a numeric mode. `ε = 0` is accepted as the formal `j → 0` limit.
    pub fn numeric(value: f64) -> Result<Self, RingError> {
        if value.is_finite() && value >= 0.0 {
            Ok(JMode::Numeric(value))
        } else {
            Err(RingError::InvalidMode(format!("numeric j must be finite and non-negative, got {value}")))
        }
    }

    /// Parses `1`, `iota` (or `ι`) and decimal floats.
    pub fn parse(text: &str) -> Result<Self, RingError> {
        match text.trim() {
            "1" | "one" | "One" => Ok(JMode::One),
            "iota" | "ι" | "nilpotent" | "Nilpotent" => Ok(JMode::Nilpotent),
            other => other
                .parse::<f64>()
                .map_err(|_| RingError::InvalidMode(format!("expected 1, iota or a number, got {other:?}")))
                .and_then(JMode::numeric),
        }
    }

    pub fn label(&self) -> String {
        match self {
            JMode::One => "1".to_string(),
            JMode::Nilpotent => "iota".to_string(),
            JMode::Numeric(v) => format!("{v}"),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, JMode::Numeric(_))
    }
}

impl fmt::Display for JMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn cr(re: BigRational, im: BigRational) -> ComplexRational {
    Complex::new(re, im)
}

pub fn cr_int(re: i64, im: i64) -> ComplexRational {
    Complex::new(rat(re, 1), rat(im, 1))
}

pub fn cr_is_zero(c: &ComplexRational) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

pub fn cr_to_f64(c: &ComplexRational) -> Complex64 {
    Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

/// `|c|²` as an exact rational.
pub fn cr_norm_sqr(c: &ComplexRational) -> BigRational {
    &c.re * &c.re + &c.im * &c.im
}

/// Parses an exact rational from `p`, `p/q` or a decimal literal such as `0.652`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(p) => (&t[..p], t[p + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let negative = mantissa.starts_with('-');
    let digits = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut value = BigRational::from_integer(all.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    for _ in 0..scale.unsigned_abs() {
        if scale > 0 {
            value *= &ten;
        } else {
            value /= &ten;
        }
    }
    Some(if negative { -value } else { value })
}

/// Exact rational square root, when one exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Polynomial in `j` with exact complex-rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContractionScalar {
    coeffs: BTreeMap<u32, ComplexRational>,
}

/// Result of reducing a scalar in a given mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Reduced {
    Exact(ContractionScalar),
    Float(Complex64),
}

impl Reduced {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Reduced::Exact(s) => s.eval(1.0),
            Reduced::Float(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&ContractionScalar> {
        match self {
            Reduced::Exact(s) => Some(s),
            Reduced::Float(_) => None,
        }
    }
}

impl ContractionScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(cr_int(1, 0))
    }

    pub fn constant(c: ComplexRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·j^degree`.
    pub fn monomial(c: ComplexRational, degree: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !cr_is_zero(&c) {
            coeffs.insert(degree, c);
        }
        Self { coeffs }
    }

    /// `(re + i·im)·j^degree`.
    pub fn make(re: BigRational, im: BigRational, degree: i64) -> Result<Self, RingError> {
        let degree = u32::try_from(degree).map_err(|_| RingError::NegativeDegree(degree))?;
        Ok(Self::monomial(Complex::new(re, im), degree))
    }

    pub fn j() -> Self {
        Self::monomial(cr_int(1, 0), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: u32) -> ComplexRational {
        self.coeffs.get(&degree).cloned().unwrap_or_else(|| cr_int(0, 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &ComplexRational)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    fn insert_add(&mut self, degree: u32, c: ComplexRational) {
        let entry = self.coeffs.entry(degree).or_insert_with(|| cr_int(0, 0));
        *entry = &*entry + c;
        if cr_is_zero(entry) {
            self.coeffs.remove(&degree);
        }
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        if cr_is_zero(c) {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(d, v)| (*d, v * c)).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(d, v)| (*d, v.conj())).collect() }
    }

    /// Multiplies by `j`.
    pub fn mul_j(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(d, v)| (d + 1, v.clone())).collect() }
    }

    /// Cancels one factor of `j`. Defined only when the `j⁰` coefficient vanishes.
    pub fn div_j(&self) -> Result<Self, RingError> {
        if let Some(c) = self.coeffs.get(&0) {
            return Err(RingError::DivisionUndefined(format!("{}", ScalarDisplay(c))));
        }
        Ok(Self { coeffs: self.coeffs.iter().map(|(d, v)| (d - 1, v.clone())).collect() })
    }

    /// Value at a real `j`.
    pub fn eval(&self, j: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(d, c)| cr_to_f64(c) * j.powi(*d as i32))
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    }

    /// Value at an exact rational `j`, collapsed to degree 0.
    pub fn eval_exact(&self, j: &BigRational) -> ComplexRational {
        let mut acc = cr_int(0, 0);
        for (d, c) in &self.coeffs {
            let mut p = BigRational::one();
            for _ in 0..*d {
                p *= j;
            }
            acc += c * p;
        }
        acc
    }

    pub fn reduce(&self, mode: JMode) -> Reduced {
        match mode {
            JMode::Numeric(eps) => Reduced::Float(self.eval(eps)),
            _ => Reduced::Exact(self.reduce_exact(mode)),
        }
    }

    /// Exact reduction for `One` and `Nilpotent`; `Numeric` keeps the full polynomial.
    pub fn reduce_exact(&self, mode: JMode) -> Self {
        match mode {
            JMode::One => Self::constant(self.eval_exact(&BigRational::one())),
            JMode::Nilpotent => Self { coeffs: self.coeffs.range(..2).map(|(d, c)| (*d, c.clone())).collect() },
            JMode::Numeric(_) => self.clone(),
        }
    }
}

impl From<ComplexRational> for ContractionScalar {
    fn from(c: ComplexRational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for ContractionScalar {
    fn from(v: i64) -> Self {
        Self::constant(cr_int(v, 0))
    }
}

impl Add for &ContractionScalar {
    type Output = ContractionScalar;
    fn add(self, rhs: &ContractionScalar) -> ContractionScalar {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.insert_add(*d, c.clone());
        }
        out
    }
}

impl Add for ContractionScalar {
    type Output = ContractionScalar;
    fn add(self, rhs: ContractionScalar) -> ContractionScalar {
        &self + &rhs
    }
}

impl Neg for &ContractionScalar {
    type Output = ContractionScalar;
    fn neg(self) -> ContractionScalar {
        ContractionScalar { coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c.clone())).collect() }
    }
}

impl Neg for ContractionScalar {
    type Output = ContractionScalar;
    fn neg(self) -> ContractionScalar {
        -&self
    }
}

impl Sub for &ContractionScalar {
    type Output = ContractionScalar;
    fn sub(self, rhs: &ContractionScalar) -> ContractionScalar {
        self + &(-rhs)
    }
}

impl Sub for ContractionScalar {
    type Output = ContractionScalar;
    fn sub(self, rhs: ContractionScalar) -> ContractionScalar {
        &self - &rhs
    }
}

impl Mul for &ContractionScalar {
    type Output = ContractionScalar;
    fn mul(self, rhs: &ContractionScalar) -> ContractionScalar {
        let mut out = ContractionScalar::zero();
        for (da, ca) in &self.coeffs {
            for (db, cb) in &rhs.coeffs {
                out.insert_add(da + db, ca * cb);
            }
        }
        out
    }
}

impl Mul for ContractionScalar {
    type Output = ContractionScalar;
    fn mul(self, rhs: ContractionScalar) -> ContractionScalar {
        &self * &rhs
    }
}

/// Display helper for a single complex-rational coefficient.
pub struct ScalarDisplay<'a>(pub &'a ComplexRational);

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        match (c.re.is_zero(), c.im.is_zero()) {
            (_, true) => write!(f, "{}", c.re),
            (true, false) => write!(f, "{}i", c.im),
            (false, false) => {
                let sign = if c.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", c.re, sign, c.im.abs())
            }
        }
    }
}

impl fmt::Display for ContractionScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(d, c)| match d {
                0 => format!("{}", ScalarDisplay(c)),
                1 => format!("{}*j", ScalarDisplay(c)),
                _ => format!("{}*j^{d}", ScalarDisplay(c)),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(terms: &[(i64, i64, u32)]) -> ContractionScalar {
        terms
            .iter()
            .map(|&(re, im, d)| ContractionScalar::monomial(cr_int(re, im), d))
            .fold(ContractionScalar::zero(), |a, b| a + b)
    }

    #[test]
    fn make_examples() {
        assert_eq!(ContractionScalar::make(rat(1, 1), rat(0, 1), 0).unwrap(), ContractionScalar::one());
        assert!(ContractionScalar::make(rat(0, 1), rat(0, 1), 3).unwrap().is_zero());
        let ij = ContractionScalar::make(rat(0, 1), rat(1, 1), 1).unwrap();
        assert_eq!(ij.coeff(1), cr_int(0, 1));
        assert_eq!(ContractionScalar::make(rat(1, 1), rat(0, 1), -1), Err(RingError::NegativeDegree(-1)));
    }

    #[test]
    fn add_examples() {
        assert_eq!(s(&[(2, 0, 0), (1, 0, 2)]) + s(&[(3, 0, 2)]), s(&[(2, 0, 0), (4, 0, 2)]));
        let x = s(&[(1, 2, 0), (3, -1, 5)]);
        assert_eq!(&x + &ContractionScalar::zero(), x);
        assert_eq!(ContractionScalar::j() + ContractionScalar::j(), s(&[(2, 0, 1)]));
    }

    #[test]
    fn mul_keeps_grading() {
        let jj = ContractionScalar::j() * ContractionScalar::j();
        assert_eq!(jj, s(&[(1, 0, 2)]));
        assert!(jj.reduce_exact(JMode::Nilpotent).is_zero());
        let (a, b, c, d) = (2, 3, 5, 7);
        let lhs = s(&[(a, 0, 0), (b, 0, 1)]) * s(&[(c, 0, 0), (d, 0, 1)]);
        assert_eq!(lhs, s(&[(a * c, 0, 0), (a * d + b * c, 0, 1), (b * d, 0, 2)]));
        let x = s(&[(1, 1, 0), (2, 0, 3)]);
        assert_eq!(&ContractionScalar::one() * &x, x);
    }

    #[test]
    fn conj_examples() {
        assert_eq!(s(&[(0, 1, 1)]).conj(), s(&[(0, -1, 1)]));
        let real = s(&[(4, 0, 0), (-1, 0, 2)]);
        assert_eq!(real.conj(), real);
        let x = s(&[(1, 2, 0), (3, -4, 1)]);
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn nilpotent_division_rules() {
        assert_eq!(s(&[(3, 0, 1), (2, 0, 2)]).div_j().unwrap(), s(&[(3, 0, 0), (2, 0, 1)]));
        assert!(matches!(s(&[(1, 0, 0), (1, 0, 1)]).div_j(), Err(RingError::DivisionUndefined(_))));
        assert!(ContractionScalar::zero().div_j().unwrap().is_zero());
    }

    #[test]
    fn reduce_examples() {
        let x = s(&[(2, 0, 0), (3, 0, 2)]);
        assert_eq!(x.reduce(JMode::One), Reduced::Exact(s(&[(5, 0, 0)])));
        assert_eq!(x.reduce(JMode::Nilpotent), Reduced::Exact(s(&[(2, 0, 0)])));
        match ContractionScalar::j().reduce(JMode::Numeric(0.1)) {
            Reduced::Float(z) => assert!((z - Complex64::new(0.1, 0.0)).norm() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_modes_and_rationals() {
        assert_eq!(JMode::parse("iota").unwrap(), JMode::Nilpotent);
        assert_eq!(JMode::parse("1").unwrap(), JMode::One);
        assert_eq!(JMode::parse("0.01").unwrap(), JMode::Numeric(0.01));
        assert!(JMode::parse("-2").is_err());
        assert_eq!(parse_rational("0.652").unwrap(), rat(163, 250));
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("-2.5").unwrap(), rat(-5, 2));
        assert_eq!(rational_sqrt(&rat(25, 9)), Some(rat(5, 3)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
    }
}
