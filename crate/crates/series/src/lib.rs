//! Exact arithmetic for truncated formal power series in one variable `t`.
//!
//! Coefficients are arbitrary-precision integers. Rational expressions whose
//! denominators are products of `(1 - t^a)` are expanded by repeated
//! prefix sums, which keeps every expansion exact and linear in the order.

mod poly;
mod rational;

pub use poly::Polynomial;
pub use rational::RationalExpr;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("denominator exponent must be positive")]
    ZeroExponent,
    #[error("window {window} exceeds the truncation order {order}")]
    WindowTooLarge { window: usize, order: usize },
    #[error("cannot truncate a series of order {order} to the larger order {target}")]
    TruncateBeyond { order: usize, target: usize },
    #[error("invalid coefficient literal {0:?}")]
    BadLiteral(String),
}

/// A power series known exactly up to and including `t^order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

/// Result of the top-window polynomiality heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub is_polynomial: bool,
    pub degree: Option<usize>,
    pub window: usize,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, BigInt::one(), order)
    }

    /// `c * t^k`, which is the zero series when `k > order`.
    pub fn monomial(k: usize, c: BigInt, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from leading coefficients, padding with zeros or
    /// dropping terms past `order`.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `t^k`; degrees past the order read as zero.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let n = self.order();
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![BigInt::zero(); n + 1];
        if k <= n {
            out[k..].clone_from_slice(&self.coeffs[..=n - k]);
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiplication by `1 / (1 - t^a)`, done in place as a strided prefix sum.
    pub fn div_one_minus(&self, a: usize) -> Result<Self, SeriesError> {
        if a == 0 {
            return Err(SeriesError::ZeroExponent);
        }
        let mut out = self.coeffs.clone();
        for k in a..out.len() {
            let prev = out[k - a].clone();
            out[k] += prev;
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Multiplication by `1 - t^a`.
    pub fn mul_one_minus(&self, a: usize) -> Result<Self, SeriesError> {
        if a == 0 {
            return Err(SeriesError::ZeroExponent);
        }
        let mut out = self.coeffs.clone();
        for k in (a..out.len()).rev() {
            let prev = out[k - a].clone();
            out[k] -= prev;
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Restriction to a smaller order.
    pub fn truncate(&self, order: usize) -> Result<Self, SeriesError> {
        if order > self.order() {
            return Err(SeriesError::TruncateBeyond {
                order: self.order(),
                target: order,
            });
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Largest index with a nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Smallest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    pub fn first_negative(&self) -> Option<usize> {
        self.coeffs.iter().position(Signed::is_negative)
    }

    /// First degree where two series of equal order disagree.
    pub fn first_difference(&self, other: &Self) -> Result<Option<usize>, SeriesError> {
        self.check(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b))
    }

    /// True iff the top `window` coefficients vanish. Truncation can only
    /// refute polynomiality, so a positive answer is a heuristic.
    pub fn is_polynomial_window(&self, window: usize) -> Result<WindowReport, SeriesError> {
        let order = self.order();
        if window > order {
            return Err(SeriesError::WindowTooLarge { window, order });
        }
        let top = &self.coeffs[order + 1 - window..];
        Ok(WindowReport {
            is_polynomial: top.iter().all(Zero::is_zero),
            degree: self.degree(),
            window,
        })
    }

    /// Coefficients rendered as decimal strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    pub fn from_strings(items: &[String], order: usize) -> Result<Self, SeriesError> {
        let coeffs = items
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| SeriesError::BadLiteral(s.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(coeffs, order))
    }

    pub fn sum<'a, I>(order: usize, items: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = &'a TruncatedSeries>,
    {
        items
            .into_iter()
            .try_fold(Self::zero(order), |acc, s| acc.add(s))
    }
}

/// `1 / (1 - t^a)` truncated at `order`.
pub fn geometric_inverse(a: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    TruncatedSeries::one(order).div_one_minus(a)
}

/// `(1 + t)^k` truncated at `order`.
pub fn binomial_power(k: u32, order: usize) -> TruncatedSeries {
    Polynomial::binomial(k).to_series(order)
}

fn checked<T>(r: Result<T, SeriesError>) -> T {
    match r {
        Ok(v) => v,
        Err(e) => panic!("series arithmetic: {e}"),
    }
}

// Operator forms panic on order mismatch; the named methods return errors.
impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        checked(TruncatedSeries::add(self, rhs))
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        checked(TruncatedSeries::sub(self, rhs))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        checked(TruncatedSeries::mul(self, rhs))
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{}; O(t^{})]", self, self.order() + 1)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coefficients: Vec<String>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            order: self.order(),
            coefficients: self.to_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        if repr.coefficients.len() != repr.order + 1 {
            return Err(D::Error::custom("coefficient count must equal order + 1"));
        }
        TruncatedSeries::from_strings(&repr.coefficients, repr.order).map_err(D::Error::custom)
    }
}
