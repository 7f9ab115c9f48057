//! Lebesgue exponents in [1, ∞] and the derived indices used by the case
//! analyses.
//!
//! All arithmetic runs on reciprocals: 1/∞ = 0 exactly, and every derived
//! index (p′, r, p♯, q♯) is defined through its reciprocal, so comparisons
//! against case boundaries stay exact for rational inputs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::real::Real;

use super::OracleError;

/// An exponent in [1, ∞]. ∞ is a distinct value, never a large float.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum Lp {
    Finite(Real),
    Inf,
}

impl Lp {
    /// Validating constructor: requires p ≥ 1.
    pub fn new(p: Real) -> Result<Self, OracleError> {
        if p.ge3(Real::ONE) {
            Ok(Lp::Finite(p))
        } else {
            Err(OracleError::Exponent(format!("exponent {p} is below 1")))
        }
    }

    pub fn int(p: i64) -> Self {
        Lp::Finite(Real::int(p))
    }

    pub fn inf() -> Self {
        Lp::Inf
    }

    /// Builds the exponent whose reciprocal is `inv`; inv = 0 gives ∞.
    /// Requires 0 ≤ inv ≤ 1.
    pub fn from_inv(inv: Real) -> Result<Self, OracleError> {
        if inv.lt3(Real::ZERO) || inv.gt3(Real::ONE) {
            return Err(OracleError::Exponent(format!(
                "reciprocal {inv} outside [0, 1]"
            )));
        }
        if inv.is_zero() {
            Ok(Lp::Inf)
        } else {
            Ok(Lp::Finite(inv.recip()))
        }
    }

    /// 1/p, with 1/∞ = 0.
    pub fn inv(self) -> Real {
        match self {
            Lp::Finite(p) => p.recip(),
            Lp::Inf => Real::ZERO,
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Lp::Inf)
    }

    pub fn is_finite(self) -> bool {
        !self.is_inf()
    }

    /// The conjugate p′ with 1/p + 1/p′ = 1.
    pub fn conjugate(self) -> Lp {
        let inv = Real::ONE - self.inv();
        if inv.is_zero() {
            Lp::Inf
        } else {
            Lp::Finite(inv.recip())
        }
    }

    /// Finite value as f64; ∞ maps to f64::INFINITY.
    pub fn to_f64(self) -> f64 {
        match self {
            Lp::Finite(p) => p.to_f64(),
            Lp::Inf => f64::INFINITY,
        }
    }

    // Order comparisons go through reciprocals (reversed): p ≤ q ⟺ 1/p ≥ 1/q.
    pub fn le(self, other: Lp) -> bool {
        self.inv().ge3(other.inv())
    }

    pub fn lt(self, other: Lp) -> bool {
        self.inv().gt3(other.inv())
    }

    pub fn ge(self, other: Lp) -> bool {
        other.le(self)
    }

    pub fn gt(self, other: Lp) -> bool {
        other.lt(self)
    }

    pub fn eq3(self, other: Lp) -> bool {
        self.inv().eq3(other.inv())
    }

    pub fn le_int(self, k: i64) -> bool {
        self.le(Lp::int(k))
    }

    pub fn lt_int(self, k: i64) -> bool {
        self.lt(Lp::int(k))
    }

    pub fn ge_int(self, k: i64) -> bool {
        self.ge(Lp::int(k))
    }

    pub fn gt_int(self, k: i64) -> bool {
        self.gt(Lp::int(k))
    }

    pub fn eq_int(self, k: i64) -> bool {
        self.eq3(Lp::int(k))
    }
}

impl PartialEq for Lp {
    fn eq(&self, other: &Self) -> bool {
        self.eq3(*other)
    }
}

impl fmt::Display for Lp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lp::Finite(p) => write!(f, "{p}"),
            Lp::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for Lp {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" | "oo" | "∞" => Ok(Lp::Inf),
            t => {
                let v: Real = t
                    .parse()
                    .map_err(|e: crate::real::ParseRealError| OracleError::Exponent(e.to_string()))?;
                Lp::new(v)
            }
        }
    }
}

/// A pair (p, q) of Lebesgue exponents together with the derived indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: Lp,
    pub q: Lp,
}

impl ExponentPair {
    pub fn new(p: Lp, q: Lp) -> Self {
        ExponentPair { p, q }
    }

    pub fn inv_p(self) -> Real {
        self.p.inv()
    }

    pub fn inv_q(self) -> Real {
        self.q.inv()
    }

    /// 1/p′ = 1 − 1/p.
    pub fn inv_p_prime(self) -> Real {
        Real::ONE - self.p.inv()
    }

    /// 1/q′ = 1 − 1/q.
    pub fn inv_q_prime(self) -> Real {
        Real::ONE - self.q.inv()
    }

    /// r with 1/r = 1/q − 1/p, materialized only when that reciprocal is
    /// positive (q < p).
    pub fn r(self) -> Option<Lp> {
        let inv = self.inv_q() - self.inv_p();
        if inv.gt3(Real::ZERO) {
            Some(Lp::Finite(inv.recip()))
        } else {
            None
        }
    }

    /// p♯ with 1/p♯ = 1/2 − 1/p, materialized only when p > 2.
    pub fn p_sharp(self) -> Option<Lp> {
        let inv = Real::ratio(1, 2) - self.inv_p();
        if inv.gt3(Real::ZERO) {
            Some(Lp::Finite(inv.recip()))
        } else {
            None
        }
    }

    /// q♯ with 1/q♯ = 1/q − 1/2, materialized only when q < 2.
    pub fn q_sharp(self) -> Option<Lp> {
        let inv = self.inv_q() - Real::ratio(1, 2);
        if inv.gt3(Real::ZERO) {
            Some(Lp::Finite(inv.recip()))
        } else {
            None
        }
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={})", self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_is_an_involution() {
        for p in [
            Lp::int(1),
            Lp::Finite(Real::ratio(4, 3)),
            Lp::int(2),
            Lp::int(3),
            Lp::Inf,
        ] {
            assert!(p.conjugate().conjugate().eq3(p), "p = {p}");
        }
    }

    #[test]
    fn two_is_self_conjugate_and_one_pairs_with_inf() {
        assert!(Lp::int(2).conjugate().eq_int(2));
        assert!(Lp::int(1).conjugate().is_inf());
        assert!(Lp::Inf.conjugate().eq_int(1));
        assert!(Lp::Finite(Real::ratio(4, 3)).conjugate().eq3(Lp::int(4)));
    }

    #[test]
    fn exponents_below_one_are_rejected() {
        assert!(Lp::new(Real::ratio(1, 2)).is_err());
        assert!(Lp::new(Real::ONE).is_ok());
        assert!("0.75".parse::<Lp>().is_err());
        assert!("inf".parse::<Lp>().unwrap().is_inf());
        assert!("4/3"
            .parse::<Lp>()
            .unwrap()
            .eq3(Lp::Finite(Real::ratio(4, 3))));
    }

    #[test]
    fn derived_indices_materialize_only_in_their_regime() {
        // q < p: r defined; p > 2: p♯ defined; q < 2: q♯ defined.
        let e = ExponentPair::new(Lp::Inf, Lp::int(1));
        assert!(e.r().unwrap().eq_int(1));
        assert!(e.p_sharp().unwrap().eq_int(2));
        assert!(e.q_sharp().unwrap().eq_int(2));

        // p = q = 2: all three undefined.
        let e = ExponentPair::new(Lp::int(2), Lp::int(2));
        assert!(e.r().is_none());
        assert!(e.p_sharp().is_none());
        assert!(e.q_sharp().is_none());

        // q = 4, p = 2: 1/r = 1/4 - 1/2 < 0 stays undefined.
        let e = ExponentPair::new(Lp::int(2), Lp::int(4));
        assert!(e.r().is_none());
        // p = 4, q = 2: 1/r = 1/2 - 1/4 = 1/4.
        let e = ExponentPair::new(Lp::int(4), Lp::int(2));
        assert!(e.r().unwrap().eq_int(4));
    }

    #[test]
    fn order_comparisons_run_on_reciprocals() {
        assert!(Lp::int(1).lt(Lp::int(2)));
        assert!(Lp::int(2).lt(Lp::Inf));
        assert!(Lp::Inf.ge_int(2));
        assert!(Lp::Finite(Real::ratio(4, 3)).lt_int(2));
        assert!(!Lp::Inf.lt(Lp::Inf));
        assert!(Lp::Inf.eq3(Lp::Inf));
    }
}
