//! Validity of the additive uncertainty inequality with plain power weights:
//!
//! ```text
//! ‖f‖_q ≲ ‖f · |x|^α‖_q + ‖f̂ · |ξ|^β‖_p
//! ```
//!
//! over f on R^d, with a constant independent of f. The answer depends only
//! on how β compares with two dimensional thresholds, so the decision is a
//! pair of exact comparisons.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::real::Real;

use super::exponents::ExponentPair;
use super::OracleError;

/// Whether a uniform constant exists for the inequality under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "HOLDS"),
            Verdict::Fails => write!(f, "FAILS"),
        }
    }
}

/// Decides `‖f‖_q ≲ ‖f·|x|^α‖_q + ‖f̂·|ξ|^β‖_p` on R^d (d ≥ 1).
///
/// Holds iff both gates pass:
/// - β ≥ d(1 − 1/q − 1/p), with equality allowed only when p ≤ q < ∞;
/// - q ≥ 2, or p,q ≤ 2, or (q < 2 < p and β > d(1/2 − 1/p)).
///
/// α > 0 is required but does not otherwise enter the criterion.
pub fn classify_nonsymmetric(
    d: u32,
    e: ExponentPair,
    alpha: Real,
    beta: Real,
) -> Result<Verdict, OracleError> {
    if !alpha.gt3(Real::ZERO) {
        return Err(OracleError::NonPositiveWeight(format!("alpha = {alpha}")));
    }
    if !beta.gt3(Real::ZERO) {
        return Err(OracleError::NonPositiveWeight(format!("beta = {beta}")));
    }
    let dim = Real::int(d as i64);
    let thresh = dim * (Real::ONE - e.inv_q() - e.inv_p());

    let beta_gate = (e.p.le(e.q) && e.q.is_finite() && beta.eq3(thresh)) || beta.gt3(thresh);

    let shape_gate = e.q.ge_int(2)
        || (e.p.le_int(2) && e.q.le_int(2))
        || (e.q.lt_int(2)
            && e.p.gt_int(2)
            && beta.gt3(dim * (Real::ratio(1, 2) - e.inv_p())));

    Ok(if beta_gate && shape_gate {
        Verdict::Holds
    } else {
        Verdict::Fails
    })
}
