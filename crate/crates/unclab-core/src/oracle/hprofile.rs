//! Growth profile of the extremal trade-off function
//!
//! ```text
//! H(x) = sup { ‖f‖_q : ‖f · x^A‖_q ≤ x, ‖f̂ · ξ^B‖_p ≤ 1 }
//! ```
//!
//! for coordinate-wise positive broken weights A (space side) and B
//! (Fourier side). The exponents of H are rational expressions in the
//! shifted Fourier-side powers; the shapes split on the position of (p, q).

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::real::Real;
use crate::weights::BrokenWeight;

use super::exponents::ExponentPair;
use super::profile::{AsymProfile, AsymTerm, BetaIndex};
use super::OracleError;

/// Either a computed growth profile, or a declared gap: the corner
/// p = 1, q = ∞ is outside the supported case analysis and is reported as
/// Unknown rather than guessed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HProfile {
    Known(AsymProfile),
    Unknown,
}

impl HProfile {
    pub fn known(self) -> Option<AsymProfile> {
        match self {
            HProfile::Known(p) => Some(p),
            HProfile::Unknown => None,
        }
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, HProfile::Unknown)
    }
}

impl fmt::Display for HProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HProfile::Known(p) => write!(f, "{p}"),
            HProfile::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// Profile with small power n₂/(A₁ + n₂) and large power n₁/(A₂ + n₁):
/// the numerator pair acts transposed against the regimes of A.
fn broken_power(n: BrokenWeight, a: BrokenWeight) -> AsymProfile {
    AsymProfile::finite(
        AsymTerm::power(n.a2 / (a.a1 + n.a2)),
        AsymTerm::power(n.a1 / (a.a2 + n.a1)),
    )
}

/// Computes the growth profile of H for the weights A, B on R^d.
pub fn h_profile(
    d: u32,
    e: ExponentPair,
    a: BrokenWeight,
    b: BrokenWeight,
) -> Result<HProfile, OracleError> {
    if !a.is_positive() {
        return Err(OracleError::NonPositiveWeight(format!("A = {a}")));
    }
    if !b.is_positive() {
        return Err(OracleError::NonPositiveWeight(format!("B = {b}")));
    }
    if e.p.eq_int(1) && e.q.is_inf() {
        return Ok(HProfile::Unknown);
    }
    let dim = Real::int(d as i64);
    let m = dim * (e.inv_p() + e.inv_q() - Real::ONE);
    let beta = BetaIndex::new(d, e, b).0;

    if e.q.is_inf() {
        // p > 1 here. Pivot d/p′ must be cleared strictly by the tail.
        let dpp = dim * e.inv_p_prime();
        if !b.a2.gt3(dpp) {
            return Ok(HProfile::Known(AsymProfile::Infinite));
        }
        let profile = if b.a1.eq3(dpp) {
            AsymProfile::finite(
                AsymTerm::power(beta.a2 / (a.a1 + beta.a2)),
                AsymTerm::with_log_at_infinity(Real::ZERO, e.inv_p_prime()),
            )
        } else {
            broken_power(beta, a)
        };
        return Ok(HProfile::Known(profile));
    }

    if e.p.le(e.q) {
        // p ≤ q < ∞: the shifted tail may vanish but not go negative.
        return Ok(HProfile::Known(if (b.a2 + m).ge3(Real::ZERO) {
            broken_power(beta, a)
        } else {
            AsymProfile::Infinite
        }));
    }

    if e.q.ge_int(2) || e.p.le_int(2) {
        // q < p with max(q, p′) ≥ 2: strict tail, and a vanishing shifted
        // head converts the large regime into a pure log of exponent 1/r.
        if !(b.a2 + m).gt3(Real::ZERO) {
            return Ok(HProfile::Known(AsymProfile::Infinite));
        }
        let profile = if (b.a1 + m).eq3(Real::ZERO) {
            AsymProfile::finite(
                AsymTerm::power(beta.a2 / (a.a1 + beta.a2)),
                AsymTerm::with_log_at_infinity(Real::ZERO, e.inv_q() - e.inv_p()),
            )
        } else {
            broken_power(beta, a)
        };
        return Ok(HProfile::Known(profile));
    }

    // q < 2 < p: exponents are built from the q = 2 shift plus the excess
    // σ = d(1/q − 1/2) > 0.
    let m2 = dim * (e.inv_p() - Real::ratio(1, 2));
    let sigma = dim * (e.inv_q() - Real::ratio(1, 2));
    if !(b.a2 + m2).gt3(Real::ZERO) {
        return Ok(HProfile::Known(AsymProfile::Infinite));
    }
    let shifted = BrokenWeight::new(
        (b.a1 + m2).max3(Real::ZERO) + sigma,
        b.a2 + m2 + sigma,
    );
    let profile = if (b.a1 + m2).eq3(Real::ZERO) {
        AsymProfile::finite(
            AsymTerm::power(shifted.a2 / (a.a1 + shifted.a2)),
            AsymTerm::with_log_at_infinity(
                sigma / (a.a2 + sigma),
                a.a2 * (Real::ratio(1, 2) - e.inv_p()) / (a.a2 + sigma),
            ),
        )
    } else {
        broken_power(shifted, a)
    };
    Ok(HProfile::Known(profile))
}
