//! Exact arithmetic in `Z[q]` and the q-combinatorial quantities built on it.
//!
//! Every matrix entry in this crate is a [`QPoly`]. Coefficients are
//! arbitrary precision and the coefficient vector is kept canonical (no
//! trailing zeros), so structural equality is polynomial equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};

/// An exact rational evaluation point for `q`.
///
/// `BigRational` keeps the fraction reduced with a positive denominator.
pub type QScalar = BigRational;

/// A univariate polynomial in `q` with integer coefficients.
///
/// `coeffs[i]` is the coefficient of `q^i`. The zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut p = QPoly {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.normalize();
        p
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs([c.into()])
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * q^power`.
    pub fn monomial(c: impl Into<BigInt>, power: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); power + 1];
        coeffs[power] = c;
        QPoly { coeffs }
    }

    /// `1 - q`, the falling weight of a single crossing.
    pub fn one_minus_q() -> Self {
        Self::from_coeffs([1, -1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree of the polynomial, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiply by `q^power`.
    pub fn shift(&self, power: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); power];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval(&self, x: &QScalar) -> QScalar {
        self.coeffs.iter().rev().fold(QScalar::zero(), |acc, c| {
            acc * x + QScalar::from_integer(c.clone())
        })
    }

    /// Sum of the coefficients, i.e. the value at `q = 1`.
    pub fn sum_of_coeffs(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl Zero for QPoly {
    fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for QPoly {
    fn one() -> Self {
        Self::constant(1)
    }

    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QPoly {
    type Output = QPoly;

    fn add(mut self, rhs: QPoly) -> QPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.normalize();
    }
}

impl AddAssign for QPoly {
    fn add_assign(&mut self, rhs: QPoly) {
        *self += &rhs;
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QPoly {
    type Output = QPoly;

    fn sub(mut self, rhs: QPoly) -> QPoly {
        self -= &rhs;
        self
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        self.normalize();
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = QPoly { coeffs };
        p.normalize();
        p
    }
}

impl Mul for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl Add<&QPoly> for QPoly {
    type Output = QPoly;

    fn add(mut self, rhs: &QPoly) -> QPoly {
        self += rhs;
        self
    }
}

impl Sub<&QPoly> for QPoly {
    type Output = QPoly;

    fn sub(mut self, rhs: &QPoly) -> QPoly {
        self -= rhs;
        self
    }
}

impl Mul<&QPoly> for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        &self * rhs
    }
}

impl Neg for QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        -(self.clone())
    }
}

impl std::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for QPoly {
    fn product<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::one(), |acc, p| acc * p)
    }
}

/// Renders as e.g. `1 - q + 2q^3`; the zero polynomial renders as `0`.
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match power {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}")?;
                    }
                    if power == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{power}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn bigint_to_json(n: &BigInt) -> serde_json::Value {
    // arbitrary_precision keeps the digits exact however large they are.
    serde_json::Value::Number(
        serde_json::Number::from_str(&n.to_string()).expect("integer literal is valid JSON"),
    )
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| Error::Json(format!("expected an integer, found {n}"))),
        other => Err(Error::Json(format!("expected an integer, found {other}"))),
    }
}

impl QPoly {
    /// `{"coeffs": [c0, c1, ...]}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coeffs": self.coeffs.iter().map(bigint_to_json).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Json("polynomial needs a \"coeffs\" array".into()))?;
        let coeffs = coeffs
            .iter()
            .map(bigint_from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(coeffs))
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        let coeffs: Vec<_> = self.coeffs.iter().map(bigint_to_json).collect();
        map.serialize_entry("coeffs", &coeffs)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        QPoly::from_json(&v).map_err(de::Error::custom)
    }
}

/// `{"num": n, "den": d}`
pub fn scalar_to_json(x: &QScalar) -> serde_json::Value {
    serde_json::json!({
        "num": bigint_to_json(x.numer()),
        "den": bigint_to_json(x.denom()),
    })
}

pub fn scalar_from_json(v: &serde_json::Value) -> Result<QScalar> {
    let field = |name: &str| {
        v.get(name)
            .ok_or_else(|| Error::Json(format!("rational needs a {name:?} field")))
            .and_then(bigint_from_json)
    };
    let (num, den) = (field("num")?, field("den")?);
    if den.is_zero() {
        return Err(Error::Json("rational with zero denominator".into()));
    }
    Ok(QScalar::new(num, den))
}

/// Parses `"p/q"` or a bare integer.
pub fn parse_scalar(text: &str) -> Result<QScalar> {
    let bad = || Error::BadRational(text.to_string());
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(QScalar::new(num, den))
}

/// The quantum integer `[k] = 1 + q + ... + q^(k-1)`.
pub fn quantum_int(k: u32) -> QPoly {
    QPoly::from_coeffs(std::iter::repeat_n(1, k as usize))
}

/// `[k]! = [k][k-1]...[1]`, with `[0]! = 1`.
pub fn q_factorial(k: u32) -> QPoly {
    (1..=k).map(quantum_int).product()
}

/// The Gaussian binomial `[k choose r]`, zero outside `0 <= r <= k`.
///
/// Built row by row with the q-Pascal rule
/// `[k, r] = [k-1, r-1] + q^r [k-1, r]`.
pub fn gauss_binom(k: u32, r: i64) -> QPoly {
    if r < 0 || r > k as i64 {
        return QPoly::zero();
    }
    let r = r as usize;
    let mut row = vec![QPoly::one()];
    for n in 1..=k as usize {
        let mut next = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let left = if j > 0 {
                row[j - 1].clone()
            } else {
                QPoly::zero()
            };
            let right = row.get(j).map(|p| p.shift(j)).unwrap_or_default();
            next.push(left + right);
        }
        row = next;
    }
    row.swap_remove(r)
}

/// Pairs `i < j` with `w[i] > w[j]`.
pub fn inversions_perm<T: Ord>(w: &[T]) -> usize {
    (0..w.len())
        .map(|i| w[i + 1..].iter().filter(|x| **x < w[i]).count())
        .sum()
}

/// Pairs `i < j` with `s[i] = 1` and `s[j] = 0`.
pub fn inversions_binary(s: &[bool]) -> usize {
    let mut ones = 0;
    let mut inversions = 0;
    for &bit in s {
        if bit {
            ones += 1;
        } else {
            inversions += ones;
        }
    }
    inversions
}

/// Probability that exactly `c` of the `a` balls on the over group of a
/// `cable`-wide crossing fall, when `b` balls ride the under group.
///
/// Computed as `[a,c] [K-b,c] [c]! (1-q)^c q^((a-c)(K-b-c))`, which stays in
/// `Z[q]`. Zero when `c > a` or `c > K - b`.
pub fn falling_probability(cable: u32, a: u32, b: u32, c: u32) -> Result<QPoly> {
    if cable == 0 {
        return Err(precondition("cable width must be at least 1"));
    }
    if a > cable || b > cable {
        return Err(precondition(format!(
            "ball counts a={a}, b={b} must not exceed the cable width {cable}"
        )));
    }
    let empty_below = cable - b;
    if c > a || c > empty_below {
        return Ok(QPoly::zero());
    }
    let survivals = ((a - c) * (empty_below - c)) as usize;
    let p = gauss_binom(a, c as i64)
        * gauss_binom(empty_below, c as i64)
        * q_factorial(c)
        * QPoly::one_minus_q().pow(c);
    Ok(p.shift(survivals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::from_coeffs(coeffs.iter().copied())
    }

    fn r(n: i64, d: i64) -> QScalar {
        QScalar::new(n.into(), d.into())
    }

    // Independent oracles: brute-force inversion generating functions.
    fn perm_inversion_sum(k: usize) -> QPoly {
        (0..k)
            .permutations(k)
            .map(|w| QPoly::monomial(1, inversions_perm(&w)))
            .sum()
    }

    fn binary_inversion_sum(k: usize, ones: usize) -> QPoly {
        (0..k)
            .combinations(ones)
            .map(|pos| {
                let s: Vec<bool> = (0..k).map(|i| pos.contains(&i)).collect();
                QPoly::monomial(1, inversions_binary(&s))
            })
            .sum()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(p(&[1, -1]) + QPoly::q(), QPoly::one());
        assert_eq!(p(&[1, -1]) * p(&[1, 1]), p(&[1, 0, -1]));
        assert!((p(&[3, 4, 5]) * QPoly::zero()).is_zero());
        assert_eq!(-p(&[1, -2]), p(&[-1, 2]));
        assert_eq!(p(&[1, 2]).scale(&BigInt::from(-3)), p(&[-3, -6]));
        assert!(p(&[0, 0, 0]).is_zero());
        assert_eq!(p(&[1, 0, 0]).coeffs().len(), 1);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[0, 0, 1]).eval(&r(1, 2)), r(1, 4));
        assert_eq!(p(&[1, -1]).eval(&r(1, 1)), r(0, 1));
        assert_eq!(p(&[1, 1, 1]).eval(&r(2, 1)), r(7, 1));
    }

    #[test]
    fn quantum_integers() {
        assert!(quantum_int(0).is_zero());
        assert!(quantum_int(1).is_one());
        assert_eq!(quantum_int(3), p(&[1, 1, 1]));
        // [k](1-q) = 1 - q^k
        for k in 0..7 {
            let lhs = quantum_int(k) * QPoly::one_minus_q();
            assert_eq!(lhs, QPoly::one() - QPoly::monomial(1, k as usize));
        }
    }

    #[test]
    fn factorials() {
        assert!(q_factorial(0).is_one());
        assert_eq!(q_factorial(2), p(&[1, 1]));
        assert_eq!(q_factorial(3), p(&[1, 2, 2, 1]));
        assert_eq!(q_factorial(3), perm_inversion_sum(3));
    }

    #[test]
    fn gaussian_binomials() {
        for k in 0..6 {
            assert!(gauss_binom(k, 0).is_one());
        }
        assert_eq!(gauss_binom(2, 1), p(&[1, 1]));
        assert_eq!(binary_inversion_sum(4, 2), p(&[1, 1, 2, 1, 1]));
        assert_eq!(gauss_binom(4, 2), p(&[1, 1, 2, 1, 1]));
        assert!(gauss_binom(3, -1).is_zero());
        assert!(gauss_binom(3, 4).is_zero());
    }

    #[test]
    fn gaussian_binomial_is_factorial_quotient() {
        for k in 0..7u32 {
            for r in 0..=k {
                let lhs = gauss_binom(k, r as i64) * q_factorial(r) * q_factorial(k - r);
                assert_eq!(lhs, q_factorial(k), "k={k} r={r}");
            }
        }
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(inversions_perm(&[1, 2, 3]), 0);
        assert_eq!(inversions_perm(&[3, 2, 1]), 3);
        assert_eq!(inversions_binary(&[true, false, true, false]), 3);
        assert_eq!(inversions_binary(&[]), 0);
    }

    #[test]
    fn falling_probability_examples() {
        assert_eq!(falling_probability(1, 1, 0, 1).unwrap(), p(&[1, -1]));
        assert_eq!(falling_probability(1, 1, 0, 0).unwrap(), QPoly::q());
        // q(1-q)(1+q)^2, expanded by hand: q + q^2 - q^3 - q^4
        assert_eq!(
            falling_probability(2, 2, 0, 1).unwrap(),
            p(&[0, 1, 1, -1, -1])
        );
        assert_eq!(falling_probability(2, 1, 1, 1).unwrap(), p(&[1, -1]));
        assert!(falling_probability(2, 1, 2, 1).unwrap().is_zero());
        assert!(falling_probability(2, 1, 0, 2).unwrap().is_zero());
    }

    #[test]
    fn falling_probability_rejects_bad_counts() {
        assert!(falling_probability(2, 3, 0, 0).is_err());
        assert!(falling_probability(2, 0, 3, 0).is_err());
        assert!(falling_probability(0, 0, 0, 0).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1]).to_string(), "1 - q");
        assert_eq!(p(&[0, 1, 0, -2]).to_string(), "q - 2q^3");
        assert_eq!(p(&[-1, 0, 3]).to_string(), "-1 + 3q^2");
        assert_eq!(QPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_encodings() {
        let poly = p(&[1, 0, -1]);
        assert_eq!(poly.to_json().to_string(), r#"{"coeffs":[1,0,-1]}"#);
        assert_eq!(QPoly::from_json(&poly.to_json()).unwrap(), poly);
        assert_eq!(QPoly::zero().to_json().to_string(), r#"{"coeffs":[]}"#);
        let big = QPoly::monomial(BigInt::from(10).pow(40), 2);
        assert_eq!(QPoly::from_json(&big.to_json()).unwrap(), big);
        let half = r(-1, 2);
        assert_eq!(scalar_to_json(&half).to_string(), r#"{"num":-1,"den":2}"#);
        assert_eq!(scalar_from_json(&scalar_to_json(&half)).unwrap(), half);
    }

    #[test]
    fn scalar_parsing() {
        assert_eq!(parse_scalar("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_scalar("-1").unwrap(), r(-1, 1));
        assert_eq!(parse_scalar("4/6").unwrap(), r(2, 3));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("q").is_err());
    }
}
