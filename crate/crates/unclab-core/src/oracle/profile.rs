//! Symbolic asymptotic profiles: the power/log building blocks that the
//! decision procedures emit and the slope-fitting harness consumes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::real::Real;
use crate::weights::BrokenWeight;

use super::exponents::ExponentPair;

/// Which logarithm a term carries: log(t+1) grows at infinity, log₊(1/t)
/// grows toward zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogArg {
    NearZero,
    NearInfinity,
}

/// One asymptotic building block t^power · log(...)^logpow.
///
/// logpow = 0 is normalized to logarg = NearInfinity so profile equality can
/// compare plain tuples.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AsymTerm {
    pub power: Real,
    pub logpow: Real,
    pub logarg: LogArg,
}

impl AsymTerm {
    pub fn power(power: Real) -> Self {
        AsymTerm {
            power,
            logpow: Real::ZERO,
            logarg: LogArg::NearInfinity,
        }
    }

    pub fn constant() -> Self {
        AsymTerm::power(Real::ZERO)
    }

    pub fn new(power: Real, logpow: Real, logarg: LogArg) -> Self {
        if logpow.is_zero() {
            AsymTerm::power(power)
        } else {
            AsymTerm {
                power,
                logpow,
                logarg,
            }
        }
    }

    /// t^power · log(t+1)^logpow.
    pub fn with_log_at_infinity(power: Real, logpow: Real) -> Self {
        AsymTerm::new(power, logpow, LogArg::NearInfinity)
    }

    /// t^power · log₊(1/t)^logpow.
    pub fn with_log_near_zero(power: Real, logpow: Real) -> Self {
        AsymTerm::new(power, logpow, LogArg::NearZero)
    }

    pub fn has_log(&self) -> bool {
        !self.logpow.is_zero()
    }

    /// Numeric value of the term at argument t > 0, for comparison against
    /// measured ratios. log₊ clamps at zero so the term stays finite on the
    /// wrong side of its regime.
    pub fn eval(&self, t: f64) -> f64 {
        let base = t.powf(self.power.to_f64());
        if self.logpow.is_zero() {
            return base;
        }
        let log = match self.logarg {
            LogArg::NearInfinity => (t + 1.0).ln(),
            LogArg::NearZero => (1.0 / t).ln().max(0.0),
        };
        base * log.powf(self.logpow.to_f64())
    }
}

impl PartialEq for AsymTerm {
    fn eq(&self, other: &Self) -> bool {
        self.power.eq3(other.power)
            && self.logpow.eq3(other.logpow)
            && (self.logpow.is_zero() || self.logarg == other.logarg)
    }
}

/// Formats a power for display: up to 6 decimals, trailing zeros trimmed.
pub(crate) fn fmt_exponent(x: Real) -> String {
    let v = x.to_f64();
    let mut s = format!("{v:.6}");
    while s.contains('.') && (s.ends_with('0') || s.ends_with('.')) {
        s.pop();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

impl fmt::Display for AsymTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}", fmt_exponent(self.power))?;
        if self.has_log() {
            match self.logarg {
                LogArg::NearInfinity => {
                    write!(f, " · log(x+1)^{}", fmt_exponent(self.logpow))?
                }
                LogArg::NearZero => {
                    write!(f, " · log₊(1/x)^{}", fmt_exponent(self.logpow))?
                }
            }
        }
        Ok(())
    }
}

/// Piecewise asymptotic profile over the two regimes of the argument
/// (below and above 1), or divergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AsymProfile {
    Finite { small: AsymTerm, large: AsymTerm },
    Infinite,
}

impl AsymProfile {
    pub fn finite(small: AsymTerm, large: AsymTerm) -> Self {
        AsymProfile::Finite { small, large }
    }

    /// Same pure power in both regimes.
    pub fn pure_power(power: Real) -> Self {
        AsymProfile::finite(AsymTerm::power(power), AsymTerm::power(power))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, AsymProfile::Finite { .. })
    }

    pub fn small(&self) -> Option<AsymTerm> {
        match self {
            AsymProfile::Finite { small, .. } => Some(*small),
            AsymProfile::Infinite => None,
        }
    }

    pub fn large(&self) -> Option<AsymTerm> {
        match self {
            AsymProfile::Finite { large, .. } => Some(*large),
            AsymProfile::Infinite => None,
        }
    }

    /// Value at argument t, selecting the regime by t < 1 or t ≥ 1.
    pub fn eval(&self, t: f64) -> Option<f64> {
        match self {
            AsymProfile::Finite { small, large } => {
                Some(if t < 1.0 { small.eval(t) } else { large.eval(t) })
            }
            AsymProfile::Infinite => None,
        }
    }
}

impl fmt::Display for AsymProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymProfile::Finite { small, large } => write!(f, "{large} | {small}"),
            AsymProfile::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// The index pair (max(B₁ + d(1/p + 1/q − 1), 0), B₂ + d(1/p + 1/q − 1))
/// driving the power laws of the optimal uncertainty profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaIndex(pub BrokenWeight);

impl BetaIndex {
    /// Builds β_{p,q} from the dimension, exponent pair, and Fourier-side
    /// weight B.
    pub fn new(d: u32, e: ExponentPair, b: BrokenWeight) -> Self {
        let m = Real::int(d as i64) * (e.inv_p() + e.inv_q() - Real::ONE);
        BetaIndex(BrokenWeight::new(
            (b.a1 + m).max3(Real::ZERO),
            b.a2 + m,
        ))
    }

    pub fn transpose(self) -> BrokenWeight {
        self.0.transpose()
    }
}
