//! Scalar values for the case analyses.
//!
//! The decision procedures branch on equalities between derived exponents,
//! e.g. whether `beta = d(1 - 1/q - 1/p)` exactly. Those boundaries carry
//! different answers than either side, so comparisons must be exact whenever
//! the inputs are exact. [`Real`] keeps a reduced `i64` fraction as long as
//! arithmetic stays inside it and falls back to `f64` otherwise; comparisons
//! between two fractions are exact, anything involving a float uses
//! [`REL_EQ_TOL`].

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Relative tolerance for comparisons where at least one operand is not an
/// exact fraction. Adjust here if callers feed exponents produced by long
/// float computations.
pub const REL_EQ_TOL: f64 = 1e-12;

/// Exact-when-possible scalar: a reduced fraction or a float fallback.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum Real {
    /// Reduced fraction; `den > 0`.
    Rat { num: i64, den: i64 },
    Float(f64),
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn make_rat(mut num: i128, mut den: i128) -> Real {
    debug_assert!(den != 0);
    if den < 0 {
        num = -num;
        den = -den;
    }
    let g = gcd(num, den).max(1);
    num /= g;
    den /= g;
    if num.abs() <= i64::MAX as i128 && den <= i64::MAX as i128 {
        Real::Rat {
            num: num as i64,
            den: den as i64,
        }
    } else {
        Real::Float(num as f64 / den as f64)
    }
}

impl Real {
    pub const ZERO: Real = Real::Rat { num: 0, den: 1 };
    pub const ONE: Real = Real::Rat { num: 1, den: 1 };

    pub fn int(k: i64) -> Real {
        Real::Rat { num: k, den: 1 }
    }

    pub fn ratio(num: i64, den: i64) -> Real {
        assert!(den != 0, "zero denominator");
        make_rat(num as i128, den as i128)
    }

    /// Recovers an exact fraction from floats that are dyadic with denominator
    /// up to 2^32 (covers integer and binary-fraction inputs like 0.25).
    /// Decimal strings should be parsed with [`Real::from_str`] instead, which
    /// is exact for all decimals.
    pub fn from_f64(x: f64) -> Real {
        if x.is_finite() {
            let scaled = x * (1u64 << 32) as f64;
            if scaled.fract() == 0.0 && scaled.abs() < 9.0e15 {
                return make_rat(scaled as i128, 1i128 << 32);
            }
        }
        Real::Float(x)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Real::Rat { num, den } => num as f64 / den as f64,
            Real::Float(x) => x,
        }
    }

    pub fn is_rational(self) -> bool {
        matches!(self, Real::Rat { .. })
    }

    /// Three-way comparison: exact between fractions, tolerance otherwise.
    pub fn cmp3(self, other: Real) -> Ordering {
        match (self, other) {
            (Real::Rat { num: a, den: b }, Real::Rat { num: c, den: d }) => {
                (a as i128 * d as i128).cmp(&(c as i128 * b as i128))
            }
            _ => {
                let a = self.to_f64();
                let b = other.to_f64();
                let scale = a.abs().max(b.abs()).max(1.0);
                if (a - b).abs() <= REL_EQ_TOL * scale {
                    Ordering::Equal
                } else {
                    a.total_cmp(&b)
                }
            }
        }
    }

    pub fn eq3(self, other: Real) -> bool {
        self.cmp3(other) == Ordering::Equal
    }

    pub fn lt3(self, other: Real) -> bool {
        self.cmp3(other) == Ordering::Less
    }

    pub fn le3(self, other: Real) -> bool {
        self.cmp3(other) != Ordering::Greater
    }

    pub fn gt3(self, other: Real) -> bool {
        self.cmp3(other) == Ordering::Greater
    }

    pub fn ge3(self, other: Real) -> bool {
        self.cmp3(other) != Ordering::Less
    }

    /// Exact comparison against an integer, no tolerance on the float side.
    /// Branch boundaries that must not be widened (the -1 and 1 thresholds in
    /// weight integrals) go through here.
    pub fn cmp_int_exact(self, k: i64) -> Ordering {
        match self {
            Real::Rat { num, den } => (num as i128).cmp(&(k as i128 * den as i128)),
            Real::Float(x) => x.total_cmp(&(k as f64)),
        }
    }

    pub fn min3(self, other: Real) -> Real {
        if self.le3(other) {
            self
        } else {
            other
        }
    }

    pub fn max3(self, other: Real) -> Real {
        if self.ge3(other) {
            self
        } else {
            other
        }
    }

    pub fn abs(self) -> Real {
        match self {
            Real::Rat { num, den } => Real::Rat {
                num: num.abs(),
                den,
            },
            Real::Float(x) => Real::Float(x.abs()),
        }
    }

    pub fn recip(self) -> Real {
        match self {
            Real::Rat { num, den } => {
                assert!(num != 0, "reciprocal of zero");
                make_rat(den as i128, num as i128)
            }
            Real::Float(x) => Real::Float(1.0 / x),
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Real::Rat { num, .. } => num == 0,
            Real::Float(x) => x == 0.0,
        }
    }
}

impl Default for Real {
    fn default() -> Self {
        Real::ZERO
    }
}

impl From<i64> for Real {
    fn from(k: i64) -> Self {
        Real::int(k)
    }
}

impl From<i32> for Real {
    fn from(k: i32) -> Self {
        Real::int(k as i64)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::from_f64(x)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.eq3(*other)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp3(*other))
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        match (self, rhs) {
            (Real::Rat { num: a, den: b }, Real::Rat { num: c, den: d }) => make_rat(
                a as i128 * d as i128 + c as i128 * b as i128,
                b as i128 * d as i128,
            ),
            _ => Real::Float(self.to_f64() + rhs.to_f64()),
        }
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        self + (-rhs)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Rat { num, den } => Real::Rat { num: -num, den },
            Real::Float(x) => Real::Float(-x),
        }
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, rhs: Real) -> Real {
        match (self, rhs) {
            (Real::Rat { num: a, den: b }, Real::Rat { num: c, den: d }) => {
                make_rat(a as i128 * c as i128, b as i128 * d as i128)
            }
            _ => Real::Float(self.to_f64() * rhs.to_f64()),
        }
    }
}

impl Div for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        match (self, rhs) {
            (Real::Rat { num: a, den: b }, Real::Rat { num: c, den: d }) => {
                assert!(c != 0, "division by zero");
                make_rat(a as i128 * d as i128, b as i128 * c as i128)
            }
            _ => Real::Float(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rat { num, den: 1 } => write!(f, "{num}"),
            _ => write!(f, "{:.6}", self.to_f64()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseRealError {
    #[error("empty numeric literal")]
    Empty,
    #[error("malformed numeric literal")]
    Malformed,
}

impl FromStr for Real {
    type Err = ParseRealError;

    /// Parses `"3"`, `"-0.75"`, `"4/3"` exactly; anything else (scientific
    /// notation and the like) falls back to float parsing.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRealError::Empty);
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| ParseRealError::Malformed)?;
            let d: i64 = d.trim().parse().map_err(|_| ParseRealError::Malformed)?;
            if d == 0 {
                return Err(ParseRealError::Malformed);
            }
            return Ok(Real::ratio(n, d));
        }
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i128, rest),
            None => (1i128, s.strip_prefix('+').unwrap_or(s)),
        };
        if !body.is_empty()
            && body.chars().all(|c| c.is_ascii_digit() || c == '.')
            && body.chars().filter(|&c| c == '.').count() <= 1
            && body.len() <= 24
        {
            let (int_part, frac_part) = match body.split_once('.') {
                Some((i, fr)) => (i, fr),
                None => (body, ""),
            };
            let digits: String = format!("{int_part}{frac_part}");
            if !digits.is_empty() {
                if let Ok(mag) = digits.parse::<i128>() {
                    let den = 10i128.checked_pow(frac_part.len() as u32);
                    if let Some(den) = den {
                        return Ok(make_rat(sign * mag, den));
                    }
                }
            }
        }
        s.parse::<f64>()
            .map(Real::Float)
            .map_err(|_| ParseRealError::Malformed)
    }
}

/// Extended real value for integrals and constants that may diverge.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum Ext {
    Finite(f64),
    Infinite,
}

impl Ext {
    pub fn is_finite(self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ext::Finite(v) => Some(v),
            Ext::Infinite => None,
        }
    }

    /// Finite value or panic; for call sites that have already checked.
    pub fn expect_finite(self) -> f64 {
        match self {
            Ext::Finite(v) => v,
            Ext::Infinite => panic!("expected finite value"),
        }
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Ext {
        match self {
            Ext::Finite(v) => Ext::Finite(f(v)),
            Ext::Infinite => Ext::Infinite,
        }
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        match (self, rhs) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            _ => Ext::Infinite,
        }
    }
}

impl Mul<f64> for Ext {
    type Output = Ext;
    fn mul(self, rhs: f64) -> Ext {
        debug_assert!(rhs > 0.0);
        self.map(|v| v * rhs)
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a == b,
            (Ext::Infinite, Ext::Infinite) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(v) => write!(f, "{v}"),
            Ext::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_stays_exact() {
        let a = Real::ratio(1, 3);
        let b = Real::ratio(1, 6);
        let s = a + b;
        assert_eq!(s, Real::ratio(1, 2));
        assert!(s.is_rational());
        assert_eq!(a * b, Real::ratio(1, 18));
        assert_eq!(a / b, Real::int(2));
        assert_eq!(a - b, Real::ratio(1, 6));
    }

    #[test]
    fn comparison_is_exact_for_fractions() {
        // 1/3 + 1/6 - 1/2 must be exactly zero, not merely small.
        let z = Real::ratio(1, 3) + Real::ratio(1, 6) - Real::ratio(1, 2);
        assert!(z.is_zero());
        assert_eq!(z.cmp_int_exact(0), Ordering::Equal);
        // Two fractions closer than the float tolerance still compare unequal.
        let a = Real::ratio(1, 1_000_000_007);
        let b = Real::ratio(1, 1_000_000_009);
        assert!(a.gt3(b));
    }

    #[test]
    fn float_comparison_uses_relative_tolerance() {
        let a = Real::Float(1.0);
        let b = Real::Float(1.0 + 1e-14);
        assert!(a.eq3(b));
        let c = Real::Float(1.0 + 1e-9);
        assert!(a.lt3(c));
    }

    #[test]
    fn from_f64_recovers_dyadics_only() {
        assert_eq!(Real::from_f64(0.25), Real::ratio(1, 4));
        assert_eq!(Real::from_f64(-1.0), Real::int(-1));
        assert!(Real::from_f64(0.25).is_rational());
        // 0.1 is not exactly 1/10 in binary; it must stay a float.
        assert!(!Real::from_f64(0.1).is_rational());
    }

    #[test]
    fn parsing_decimals_is_exact() {
        assert_eq!("0.1".parse::<Real>().unwrap(), Real::ratio(1, 10));
        assert_eq!("-1.5".parse::<Real>().unwrap(), Real::ratio(-3, 2));
        assert_eq!("4/3".parse::<Real>().unwrap(), Real::ratio(4, 3));
        assert_eq!("7".parse::<Real>().unwrap(), Real::int(7));
        assert!("0.1".parse::<Real>().unwrap().is_rational());
        assert!("".parse::<Real>().is_err());
        assert!("1/0".parse::<Real>().is_err());
    }

    #[test]
    fn overflow_falls_back_to_float() {
        let big = Real::ratio(i64::MAX, 3);
        let prod = big * big;
        assert!(!prod.is_rational());
        assert!((prod.to_f64() - (i64::MAX as f64 / 3.0).powi(2)).abs() < 1e291);
    }

    #[test]
    fn exact_int_comparison_ignores_tolerance() {
        // A float a hair above -1 must not be treated as equal to -1.
        let x = Real::Float(-1.0 + 1e-15);
        assert_eq!(x.cmp_int_exact(-1), Ordering::Greater);
        assert_eq!(Real::int(-1).cmp_int_exact(-1), Ordering::Equal);
    }

    #[test]
    fn ext_absorbs_infinity() {
        assert_eq!(Ext::Finite(1.0) + Ext::Infinite, Ext::Infinite);
        assert_eq!(Ext::Finite(1.0) + Ext::Finite(2.0), Ext::Finite(3.0));
        assert!(!(Ext::Infinite).is_finite());
    }
}
