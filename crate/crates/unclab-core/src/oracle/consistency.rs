//! Cross-check between the two independent answers available for plain
//! power weights: the yes/no classification of the additive inequality and
//! the growth profile of the trade-off function H with the constant weights
//! A = (α, α), B = (β, β).
//!
//! The two must agree: the inequality holds exactly when H is finite, and
//! in that case H is the pure power x^{(β+m)/(α+β+m)}, m = d(1/p+1/q−1).
//! Any disagreement indicates a transcription fault in one of the case
//! trees, so the check reports the full context.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::real::Real;
use crate::weights::BrokenWeight;

use super::exponents::ExponentPair;
use super::hprofile::{h_profile, HProfile};
use super::nonsym::{classify_nonsymmetric, Verdict};
use super::profile::AsymProfile;
use super::OracleError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Consistency {
    Consistent,
    Inconsistent(String),
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Consistency::Consistent => write!(f, "CONSISTENT"),
            Consistency::Inconsistent(detail) => write!(f, "INCONSISTENT: {detail}"),
        }
    }
}

/// Runs both answers for the constant-weight setting and compares them.
///
/// The corner p = 1, q = ∞ is where the profile side declines to answer;
/// with no second opinion to contradict, it counts as consistent.
pub fn check_consistency(
    d: u32,
    e: ExponentPair,
    alpha: Real,
    beta: Real,
) -> Result<Consistency, OracleError> {
    let verdict = classify_nonsymmetric(d, e, alpha, beta)?;
    let h = h_profile(
        d,
        e,
        BrokenWeight::constant(alpha),
        BrokenWeight::constant(beta),
    )?;
    let profile = match h {
        HProfile::Unknown => return Ok(Consistency::Consistent),
        HProfile::Known(p) => p,
    };

    Ok(match (verdict, profile.is_finite()) {
        (Verdict::Holds, false) => Consistency::Inconsistent(format!(
            "d={d}, {e}, alpha={alpha}, beta={beta}: inequality holds but the profile diverges"
        )),
        (Verdict::Fails, true) => Consistency::Inconsistent(format!(
            "d={d}, {e}, alpha={alpha}, beta={beta}: inequality fails but the profile is finite ({profile})"
        )),
        (Verdict::Fails, false) => Consistency::Consistent,
        (Verdict::Holds, true) => {
            // Holds forces β + d(1/p+1/q−1) ≥ 0, so the expected power is
            // well defined with a positive denominator.
            let num = beta + Real::int(d as i64) * (e.inv_p() + e.inv_q() - Real::ONE);
            let expected = AsymProfile::pure_power(num / (alpha + num));
            if profile == expected {
                Consistency::Consistent
            } else {
                Consistency::Inconsistent(format!(
                    "d={d}, {e}, alpha={alpha}, beta={beta}: profile is {profile}, expected {expected}"
                ))
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exponents::Lp;

    fn check(d: u32, p: Lp, q: Lp, alpha: f64, beta: f64) -> Consistency {
        check_consistency(
            d,
            ExponentPair::new(p, q),
            Real::from_f64(alpha),
            Real::from_f64(beta),
        )
        .unwrap()
    }

    #[test]
    fn classical_case_agrees_on_both_paths() {
        assert!(check(1, Lp::int(2), Lp::int(2), 1.0, 1.0).is_consistent());
    }

    #[test]
    fn failing_case_agrees_on_both_paths() {
        assert!(check(1, Lp::Inf, Lp::int(1), 1.0, 0.4).is_consistent());
    }

    #[test]
    fn declined_corner_counts_as_consistent() {
        assert!(check(1, Lp::int(1), Lp::Inf, 1.0, 0.4).is_consistent());
    }

    #[test]
    fn spot_grid_of_mixed_exponents_is_consistent() {
        for &p in &[Lp::int(1), Lp::Finite(Real::ratio(4, 3)), Lp::int(2), Lp::int(3), Lp::Inf] {
            for &q in &[Lp::int(1), Lp::Finite(Real::ratio(4, 3)), Lp::int(2), Lp::int(3), Lp::Inf] {
                for alpha in [0.5, 1.0] {
                    for beta in [0.1, 1.0] {
                        let got = check(1, p, q, alpha, beta);
                        assert!(
                            got.is_consistent(),
                            "p={p}, q={q}, alpha={alpha}, beta={beta}: {got}"
                        );
                    }
                }
            }
        }
    }
}
