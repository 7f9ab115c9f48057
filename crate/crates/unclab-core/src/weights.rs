//! Two-piece power weights and their one-dimensional integrals.
//!
//! A weight `x^A` with `A = (a1, a2)` means `|x|^{a1}` for `|x| < 1` and
//! `|x|^{a2}` for `|x| >= 1`. The two integral operations return both the
//! exact value and a classification of how the integral grows in its limit,
//! which is what the downstream case analyses consume.

use crate::real::{Ext, Real};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::ops::{Add, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("weight argument must be positive")]
    NonPositiveArgument,
}

/// Exponent pair of a two-piece power weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrokenWeight {
    /// Exponent on `|x| < 1`.
    pub a1: Real,
    /// Exponent on `|x| >= 1`.
    pub a2: Real,
}

impl BrokenWeight {
    pub fn new(a1: impl Into<Real>, a2: impl Into<Real>) -> Self {
        BrokenWeight {
            a1: a1.into(),
            a2: a2.into(),
        }
    }

    /// Plain power `|x|^a` (both pieces equal).
    pub fn constant(a: impl Into<Real>) -> Self {
        let a = a.into();
        BrokenWeight { a1: a, a2: a }
    }

    pub fn eval(&self, x: f64) -> Result<f64, WeightError> {
        if !(x > 0.0) {
            return Err(WeightError::NonPositiveArgument);
        }
        Ok(self.eval_pos(x))
    }

    /// Evaluation for callers that guarantee `x >= 0`; the origin takes
    /// the continuous extension `0^{A_1}` (so `+inf` when `A_1 < 0`).
    pub fn eval_pos(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        if x < 1.0 {
            x.powf(self.a1.to_f64())
        } else {
            x.powf(self.a2.to_f64())
        }
    }

    /// Swapped exponents. `x^{A^T} = (1/x)^{-A}` for `x > 0`.
    pub fn transpose(self) -> Self {
        BrokenWeight {
            a1: self.a2,
            a2: self.a1,
        }
    }

    pub fn negate(self) -> Self {
        BrokenWeight {
            a1: -self.a1,
            a2: -self.a2,
        }
    }

    pub fn scale(self, k: impl Into<Real>) -> Self {
        let k = k.into();
        BrokenWeight {
            a1: self.a1 * k,
            a2: self.a2 * k,
        }
    }

    /// Both exponents shifted by the same amount, e.g. `A + 1`.
    pub fn shift(self, k: impl Into<Real>) -> Self {
        let k = k.into();
        BrokenWeight {
            a1: self.a1 + k,
            a2: self.a2 + k,
        }
    }

    /// Strict positivity of both exponents.
    pub fn is_positive(&self) -> bool {
        self.a1.gt3(Real::ZERO) && self.a2.gt3(Real::ZERO)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.a1.ge3(Real::ZERO) && self.a2.ge3(Real::ZERO)
    }
}

impl Add for BrokenWeight {
    type Output = BrokenWeight;
    fn add(self, rhs: BrokenWeight) -> BrokenWeight {
        BrokenWeight {
            a1: self.a1 + rhs.a1,
            a2: self.a2 + rhs.a2,
        }
    }
}

impl Sub for BrokenWeight {
    type Output = BrokenWeight;
    fn sub(self, rhs: BrokenWeight) -> BrokenWeight {
        BrokenWeight {
            a1: self.a1 - rhs.a1,
            a2: self.a2 - rhs.a2,
        }
    }
}

impl std::fmt::Display for BrokenWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

/// Growth classification of a weight integral in its limit (`x -> inf` for
/// integrals from zero, `x -> 0` for integrals to infinity).
///
/// `power` is itself a two-piece exponent pair: the integral behaves like
/// `x^{power}` with the piece selected by the size of `x`, up to the extra
/// factor named by the variant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum IntegralAsym {
    PowerOnly {
        power: BrokenWeight,
    },
    /// Power plus a single logarithm: `log(x + 1)` when `log_near_zero` is
    /// false, `log_+(1/x)` when true.
    PowerPlusLog {
        power: BrokenWeight,
        logpow: f64,
        log_near_zero: bool,
    },
    /// Power plus a constant contribution on one side of `x = 1`.
    PowerPlusIndicator {
        power: BrokenWeight,
        indicator_above_one: bool,
    },
    Infinite,
}

impl IntegralAsym {
    /// Evaluates the comparison expression at `x`, with implied constant one.
    pub fn eval(&self, x: f64) -> Ext {
        debug_assert!(x > 0.0);
        match self {
            IntegralAsym::PowerOnly { power } => Ext::Finite(power.eval_pos(x)),
            IntegralAsym::PowerPlusLog {
                power,
                logpow,
                log_near_zero,
            } => {
                let log = if *log_near_zero {
                    (1.0 / x).ln().max(0.0)
                } else {
                    (x + 1.0).ln()
                };
                Ext::Finite(power.eval_pos(x) + log.powf(*logpow))
            }
            IntegralAsym::PowerPlusIndicator {
                power,
                indicator_above_one,
            } => {
                let ind = if *indicator_above_one { x > 1.0 } else { x < 1.0 };
                Ext::Finite(power.eval_pos(x) + if ind { 1.0 } else { 0.0 })
            }
            IntegralAsym::Infinite => Ext::Infinite,
        }
    }
}

/// `int_0^x y^A dy`: exact value and growth classification as `x -> inf`.
///
/// Cases by the exponents (boundaries compared exactly):
/// * `a1 <= -1`: divergent at the origin for every `x`;
/// * `a1, a2 > -1`: grows like `x^{A+1}`;
/// * `a1 > a2 = -1`: grows like `x^{A+1} + log(x+1)`;
/// * `a2 < -1 < a1`: bounded for large `x`, i.e. `x^{A+1} + 1_{x>1}`.
pub fn integral_zero_to_x(a: BrokenWeight, x: f64) -> Result<(Ext, IntegralAsym), WeightError> {
    if !(x > 0.0) {
        return Err(WeightError::NonPositiveArgument);
    }
    let a1 = a.a1.to_f64();
    let a2 = a.a2.to_f64();
    let power = a.shift(1);

    if a.a1.cmp_int_exact(-1) != Ordering::Greater {
        return Ok((Ext::Infinite, IntegralAsym::Infinite));
    }
    let value = if x <= 1.0 {
        x.powf(a1 + 1.0) / (a1 + 1.0)
    } else {
        let head = 1.0 / (a1 + 1.0);
        let tail = if a.a2.cmp_int_exact(-1) == Ordering::Equal {
            x.ln()
        } else {
            (x.powf(a2 + 1.0) - 1.0) / (a2 + 1.0)
        };
        head + tail
    };
    let asym = match a.a2.cmp_int_exact(-1) {
        Ordering::Greater => IntegralAsym::PowerOnly { power },
        Ordering::Equal => IntegralAsym::PowerPlusLog {
            power,
            logpow: 1.0,
            log_near_zero: false,
        },
        Ordering::Less => IntegralAsym::PowerPlusIndicator {
            power,
            indicator_above_one: true,
        },
    };
    Ok((Ext::Finite(value), asym))
}

/// `int_x^inf y^{-A} dy`: exact value and growth classification as `x -> 0`.
///
/// Cases (boundaries compared exactly):
/// * `a2 <= 1`: divergent at infinity for every `x`;
/// * `a1, a2 > 1`: behaves like `x^{-A+1}`;
/// * `a1 < 1 < a2`: bounded for small `x`, i.e. `x^{-A+1} + 1_{x<1}`;
/// * `a1 = 1 < a2`: behaves like `x^{-A+1} + log_+(1/x)`.
pub fn integral_x_to_inf(a: BrokenWeight, x: f64) -> Result<(Ext, IntegralAsym), WeightError> {
    if !(x > 0.0) {
        return Err(WeightError::NonPositiveArgument);
    }
    let a1 = a.a1.to_f64();
    let a2 = a.a2.to_f64();
    let power = a.negate().shift(1);

    if a.a2.cmp_int_exact(1) != Ordering::Greater {
        return Ok((Ext::Infinite, IntegralAsym::Infinite));
    }
    let value = if x >= 1.0 {
        x.powf(1.0 - a2) / (a2 - 1.0)
    } else {
        let tail = 1.0 / (a2 - 1.0);
        let head = if a.a1.cmp_int_exact(1) == Ordering::Equal {
            (1.0 / x).ln()
        } else {
            (1.0 - x.powf(1.0 - a1)) / (1.0 - a1)
        };
        head + tail
    };
    let asym = match a.a1.cmp_int_exact(1) {
        Ordering::Less => IntegralAsym::PowerPlusIndicator {
            power,
            indicator_above_one: false,
        },
        Ordering::Equal => IntegralAsym::PowerPlusLog {
            power,
            logpow: 1.0,
            log_near_zero: true,
        },
        Ordering::Greater => IntegralAsym::PowerOnly { power },
    };
    Ok((Ext::Finite(value), asym))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a1: f64, a2: f64) -> BrokenWeight {
        BrokenWeight::new(Real::from_f64(a1), Real::from_f64(a2))
    }

    #[test]
    fn eval_picks_the_piece_by_size() {
        let v = w(2.0, 3.0);
        assert_eq!(v.eval(0.5).unwrap(), 0.25);
        assert_eq!(v.eval(1.0).unwrap(), 1.0);
        assert_eq!(v.eval(2.0).unwrap(), 8.0);
        assert_eq!(v.eval(0.0), Err(WeightError::NonPositiveArgument));
        assert_eq!(v.eval(-1.0), Err(WeightError::NonPositiveArgument));
    }

    #[test]
    fn transpose_matches_reciprocal_argument() {
        // (1/x)^A = x^{-A^T} for x on both sides of 1.
        let v = w(0.5, 2.0);
        let rhs = v.transpose().negate();
        for &x in &[0.2, 0.9, 1.0, 1.7, 10.0] {
            let lhs = v.eval(1.0 / x).unwrap();
            assert!((lhs - rhs.eval(x).unwrap()).abs() <= 1e-12 * lhs.abs());
        }
    }

    #[test]
    fn integral_from_zero_exact_values() {
        let (v, asym) = integral_zero_to_x(w(0.0, 0.0), 2.0).unwrap();
        assert!((v.expect_finite() - 2.0).abs() < 1e-12);
        assert_eq!(
            asym,
            IntegralAsym::PowerOnly {
                power: BrokenWeight::constant(1)
            }
        );

        // Log case: int_0^2 y^(0,-1) dy = 1 + log 2.
        let (v, asym) = integral_zero_to_x(w(0.0, -1.0), 2.0).unwrap();
        assert!((v.expect_finite() - (1.0 + 2.0f64.ln())).abs() < 1e-12);
        assert!(matches!(
            asym,
            IntegralAsym::PowerPlusLog {
                log_near_zero: false,
                ..
            }
        ));

        // Divergent at the origin.
        let (v, asym) = integral_zero_to_x(w(-1.0, 0.0), 1.0).unwrap();
        assert_eq!(v, Ext::Infinite);
        assert_eq!(asym, IntegralAsym::Infinite);

        // Bounded tail: a2 < -1 < a1.
        let (_, asym) = integral_zero_to_x(w(0.0, -2.0), 5.0).unwrap();
        assert!(matches!(
            asym,
            IntegralAsym::PowerPlusIndicator {
                indicator_above_one: true,
                ..
            }
        ));
    }

    #[test]
    fn integral_to_infinity_exact_values() {
        // int_{1/2}^inf y^{-(1/2,2)} dy = (2 - sqrt 2) + 1.
        let (v, asym) = integral_x_to_inf(w(0.5, 2.0), 0.5).unwrap();
        let expect = (2.0 - 2.0f64.sqrt()) + 1.0;
        assert!((v.expect_finite() - expect).abs() < 1e-12);
        assert!(matches!(
            asym,
            IntegralAsym::PowerPlusIndicator {
                indicator_above_one: false,
                ..
            }
        ));

        // Pure power branch for x >= 1: int_2^inf y^{-2} = 1/2.
        let (v, _) = integral_x_to_inf(w(0.5, 2.0), 2.0).unwrap();
        assert!((v.expect_finite() - 0.5).abs() < 1e-12);

        // Critical small-side exponent produces the log_+(1/x) factor.
        let (v, asym) = integral_x_to_inf(w(1.0, 2.0), 0.25).unwrap();
        assert!((v.expect_finite() - (4.0f64.ln() + 1.0)).abs() < 1e-12);
        assert!(matches!(
            asym,
            IntegralAsym::PowerPlusLog {
                log_near_zero: true,
                ..
            }
        ));

        // Divergent tail, including the boundary a2 = 1 exactly.
        let (v, _) = integral_x_to_inf(w(0.0, 1.0), 3.0).unwrap();
        assert_eq!(v, Ext::Infinite);
    }

    #[test]
    fn weight_algebra() {
        let u = w(0.5, 2.0);
        let v = w(1.0, -1.0);
        assert_eq!(u + v, w(1.5, 1.0));
        assert_eq!(u - v, w(-0.5, 3.0));
        assert_eq!(u.scale(Real::int(2)), w(1.0, 4.0));
        assert_eq!(u.shift(1), w(1.5, 3.0));
        assert_eq!(u.transpose().transpose(), u);
    }
}
