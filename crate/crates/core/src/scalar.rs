//! Truncated power series in `h` with exact rational coefficients.
//!
//! `HSeries` is the scalar ring of the whole crate: every coefficient of an
//! enveloping-algebra element, an operator matrix or a residual lives here.
//! All binary operations require equal truncation orders; a mismatch is an
//! error (or a panic through the operator impls), never a silent coercion.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Q::new(n, d)
        }
        None => Q::from_integer(s.parse().map_err(|_| Error::Parse(s.to_string()))?),
    };
    Ok(parsed)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Truncated series `c_0 + c_1 h + ... + c_K h^K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HSeries {
    coeffs: Vec<Q>,
}

impl HSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Q::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Q::one(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `h` (zero when `order == 0`).
    pub fn h(order: usize) -> Self {
        Self::monomial(Q::one(), 1, order)
    }

    /// `c h^k`, truncated away if `k > order`.
    pub fn monomial(c: Q, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from coefficients; missing tail coefficients are zero and
    /// coefficients beyond `order` are dropped.
    pub fn from_coeffs(coeffs: Vec<Q>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| q_int(c)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Q {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: Q) {
        self.coeffs[k] = c;
    }

    pub fn constant_term(&self) -> &Q {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Re-truncates (or zero-extends) to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    /// Keeps only coefficients of `h^k` with `k < n`.
    pub fn below(&self, n: usize) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut().skip(n) {
            *c = Q::zero();
        }
        s
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `h^k`, dropping what falls off the end.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut s = Self::zero(order);
        for j in 0..=order {
            if j + k <= order {
                s.coeffs[j + k] = self.coeffs[j].clone();
            }
        }
        s
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn inv(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let order = self.order();
        let inv0 = c0.recip();
        let mut out = Self::zero(order);
        out.coeffs[0] = inv0.clone();
        for k in 1..=order {
            let mut acc = Q::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = -acc * &inv0;
        }
        Ok(out)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order();
        let mut out = Self::one(order);
        let mut power = Self::one(order);
        for k in 1..=order {
            power = &power * self;
            out += &power.scale(&Q::new(BigInt::one(), factorial(k as u32)));
        }
        Ok(out)
    }

    /// Square root of a series with constant term 1, normalised to constant term 1.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SqrtConstantTerm);
        }
        let order = self.order();
        let mut out = Self::one(order);
        let two = q_int(2);
        for k in 1..=order {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                acc -= &out.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = acc / &two;
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.order());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `q^b = e^{b h}` for an exact rational `b`.
    pub fn q_power(b: &Q, order: usize) -> Self {
        Self::h(order)
            .scale(b)
            .exp()
            .expect("h has no constant term")
    }

    /// Largest absolute coefficient among the nonzero ones, and the first order
    /// at which a coefficient is nonzero.
    pub fn residual_summary(&self) -> Option<(usize, Q)> {
        let first = self.valuation()?;
        let max = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .expect("nonempty");
        Some((first, max))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Debug for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})h")?,
                _ => write!(f, "({c})h^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.order() + 1)
    }
}

impl Add for &HSeries {
    type Output = HSeries;
    fn add(self, rhs: &HSeries) -> HSeries {
        self.try_add(rhs).expect("series orders must match")
    }
}

impl Sub for &HSeries {
    type Output = HSeries;
    fn sub(self, rhs: &HSeries) -> HSeries {
        self + &(-rhs)
    }
}

impl Mul for &HSeries {
    type Output = HSeries;
    fn mul(self, rhs: &HSeries) -> HSeries {
        self.try_mul(rhs).expect("series orders must match")
    }
}

impl Neg for &HSeries {
    type Output = HSeries;
    fn neg(self) -> HSeries {
        HSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl AddAssign<&HSeries> for HSeries {
    fn add_assign(&mut self, rhs: &HSeries) {
        assert_eq!(self.order(), rhs.order(), "series orders must match");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&HSeries> for HSeries {
    fn sub_assign(&mut self, rhs: &HSeries) {
        assert_eq!(self.order(), rhs.order(), "series orders must match");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HSeriesRepr {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for HSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        HSeriesRepr {
            order: self.order(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = HSeriesRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(D::Error::custom("coefficient count must be order + 1"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_q(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(HSeries { coeffs })
    }
}

pub fn series_mul(a: &HSeries, b: &HSeries) -> Result<HSeries> {
    a.try_mul(b)
}

pub fn series_inv(a: &HSeries) -> Result<HSeries> {
    a.inv()
}

pub fn series_exp(a: &HSeries) -> Result<HSeries> {
    a.exp()
}

/// The q-integer `[k]_{q^b} = (1 - q^{bk}) / (1 - q^b) = sum_{j<k} q^{bj}` with `q = e^h`.
pub fn qnumber(k: u32, base_exponent: i64, order: usize) -> Result<HSeries> {
    if base_exponent == 0 {
        return Err(Error::ZeroBaseExponent);
    }
    let mut out = HSeries::zero(order);
    for j in 0..k {
        out += &HSeries::q_power(&q_int(base_exponent * j as i64), order);
    }
    Ok(out)
}

/// `Gamma(n+1) / Gamma_{q^2}(n+1) = prod_{k=1..n} k / [k]_{q^2}`.
pub fn gamma_ratio_sl(n: u32, order: usize) -> HSeries {
    let mut out = HSeries::one(order);
    for k in 1..=n {
        let qk = qnumber(k, 2, order).expect("base exponent is 2");
        let factor = qk.inv().expect("[k] has constant term k").scale(&q_int(k as i64));
        out = &out * &factor;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaBranch {
    Sl,
    So,
}

/// Arguments of the so(N) invariant factor: occupation `n`, Casimir root `l`
/// and rank parameter `rank` (the `N` of so(N)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QGammaQuery {
    pub n: u32,
    pub l: Q,
    pub rank: u32,
    pub branch: GammaBranch,
}

fn positive_integer_arg(x: &Q) -> Result<u32> {
    if !x.is_integer() {
        return Err(Error::UnsupportedFractionalArgument(x.to_string()));
    }
    if !x.is_positive() {
        return Err(Error::NonPositiveGammaArgument(x.to_string()));
    }
    x.to_integer()
        .to_u32()
        .ok_or_else(|| Error::Unsupported(format!("gamma argument {x} too large")))
}

/// The so(N) invariant factor
/// `Gamma(x-) Gamma(x+) / (Gamma_{q^2}(x+) Gamma_{q^2}(x-))` with
/// `x± = (n + 1 + N/2 ± l) / 2`, for positive integer arguments only.
pub fn gamma_ratio_so(query: &QGammaQuery, order: usize) -> Result<HSeries> {
    if query.branch != GammaBranch::So {
        return Err(Error::Unsupported("gamma_ratio_so needs branch=so".into()));
    }
    let base = q_int(query.n as i64 + 1) + q_frac(query.rank as i64, 2);
    let half = q_frac(1, 2);
    let minus = (&base - &query.l) * &half;
    let plus = (&base + &query.l) * &half;
    let m = positive_integer_arg(&minus)?;
    let p = positive_integer_arg(&plus)?;
    Ok(&gamma_ratio_sl(m - 1, order) * &gamma_ratio_sl(p - 1, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[(i64, i64)], order: usize) -> HSeries {
        HSeries::from_coeffs(c.iter().map(|&(n, d)| q_frac(n, d)).collect(), order)
    }

    #[test]
    fn mul_examples() {
        let a = HSeries::from_ints(&[1, 1], 2);
        let b = HSeries::from_ints(&[1, -1], 2);
        assert_eq!(&a * &b, HSeries::from_ints(&[1, 0, -1], 2));
        let e = s(&[(1, 1), (1, 1), (1, 2)], 2);
        let einv = s(&[(1, 1), (-1, 1), (1, 2)], 2);
        assert_eq!(&e * &einv, HSeries::one(2));
        let c = HSeries::from_ints(&[1, 1], 1);
        assert_eq!(&c * &c, HSeries::from_ints(&[1, 2], 1));
    }

    #[test]
    fn mismatched_orders_error() {
        let a = HSeries::one(1);
        let b = HSeries::one(2);
        assert_eq!(series_mul(&a, &b), Err(Error::OrderMismatch(1, 2)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(series_inv(&HSeries::one(3)).unwrap(), HSeries::one(3));
        assert_eq!(
            series_inv(&HSeries::from_ints(&[1, 1], 2)).unwrap(),
            HSeries::from_ints(&[1, -1, 1], 2)
        );
        let a = HSeries::from_ints(&[2, 2], 2);
        let inv = series_inv(&a).unwrap();
        assert_eq!(inv, s(&[(1, 2), (-1, 2), (1, 2)], 2));
        assert!((&a * &inv).is_one());
        assert_eq!(series_inv(&HSeries::h(2)), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(series_exp(&HSeries::zero(3)).unwrap(), HSeries::one(3));
        assert_eq!(
            series_exp(&HSeries::h(2)).unwrap(),
            s(&[(1, 1), (1, 1), (1, 2)], 2)
        );
        let two_h = HSeries::h(3).scale(&q_int(2));
        assert_eq!(
            series_exp(&two_h).unwrap(),
            s(&[(1, 1), (2, 1), (2, 1), (4, 3)], 3)
        );
        assert_eq!(
            series_exp(&HSeries::one(2)),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn qnumber_examples() {
        assert!(qnumber(0, 2, 3).unwrap().is_zero());
        assert!(qnumber(1, 2, 3).unwrap().is_one());
        assert_eq!(
            qnumber(2, 2, 3).unwrap(),
            s(&[(2, 1), (2, 1), (2, 1), (4, 3)], 3)
        );
        assert_eq!(qnumber(2, 0, 3), Err(Error::ZeroBaseExponent));
    }

    #[test]
    fn gamma_sl_examples() {
        assert!(gamma_ratio_sl(0, 3).is_one());
        assert!(gamma_ratio_sl(1, 3).is_one());
        assert_eq!(gamma_ratio_sl(2, 3), s(&[(1, 1), (-1, 1), (0, 1), (1, 3)], 3));
    }

    #[test]
    fn gamma_so_examples() {
        let q = |n, l: Q, rank| QGammaQuery {
            n,
            l,
            rank,
            branch: GammaBranch::So,
        };
        assert!(gamma_ratio_so(&q(1, q_int(0), 4), 3).unwrap().is_one());
        assert_eq!(
            gamma_ratio_so(&q(3, q_int(0), 4), 1).unwrap(),
            HSeries::from_ints(&[1, -2], 1)
        );
        assert!(matches!(
            gamma_ratio_so(&q(0, q_frac(1, 2), 3), 2),
            Err(Error::UnsupportedFractionalArgument(_))
        ));
        assert!(matches!(
            gamma_ratio_so(&q(0, q_int(5), 4), 2),
            Err(Error::NonPositiveGammaArgument(_))
        ));
    }

    #[test]
    fn sqrt_squares_back() {
        let g = gamma_ratio_sl(4, 4);
        let r = g.sqrt().unwrap();
        assert_eq!(&r * &r, g);
        assert_eq!(HSeries::from_ints(&[2], 1).sqrt(), Err(Error::SqrtConstantTerm));
    }

    #[test]
    fn json_round_trip() {
        let a = s(&[(1, 2), (-3, 7), (0, 1)], 2);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"order":2,"coeffs":["1/2","-3/7","0"]}"#);
        let back: HSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<HSeries>(r#"{"order":2,"coeffs":["1"]}"#).is_err());
    }
}
