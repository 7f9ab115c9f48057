//! Growth profile of the best constant in the trigonometric estimate
//!
//! ```text
//! ‖Σ_{|n|≤M} c_n e^{2πi⟨x,n⟩}‖_{L^q[0,1]^d} ≤ C(M) · (Σ_{|n|≤M} |c_n|^p (1+|n|)^{pγ})^{1/p}
//! ```
//!
//! as a function of the mode cutoff M ≥ 1.

use crate::real::Real;

use super::exponents::{ExponentPair, Lp};
use super::profile::{AsymProfile, AsymTerm};
use super::OracleError;

/// Computes the growth profile in M of the best constant C(M) above, for a
/// coefficient weight power γ ≥ 0.
///
/// The cutoff only ranges over M ≥ 1, so the small-argument slot of the
/// returned profile is fixed to the constant term; read the large slot.
/// For q < 2 the constant is comparable to its q = 2 analogue (randomized
/// signs equalize the two), so those inputs delegate to q = 2.
pub fn discrete_constant_profile(
    d: u32,
    e: ExponentPair,
    gamma: Real,
) -> Result<AsymProfile, OracleError> {
    if gamma.lt3(Real::ZERO) {
        return Err(OracleError::NegativeWeight(format!("gamma = {gamma}")));
    }
    if e.q.lt_int(2) {
        return discrete_constant_profile(d, ExponentPair::new(e.p, Lp::int(2)), gamma);
    }
    let dim = Real::int(d as i64);

    let large = if e.q.is_inf() {
        // Pure coefficient-sum regime with pivot d/p′.
        let pivot = dim * e.inv_p_prime();
        if gamma.lt3(pivot) {
            AsymTerm::power(pivot - gamma)
        } else if gamma.eq3(pivot) {
            AsymTerm::with_log_at_infinity(Real::ZERO, e.inv_p_prime())
        } else {
            AsymTerm::constant()
        }
    } else {
        let thresh = dim * (Real::ONE - e.inv_p() - e.inv_q());
        if e.p.le(e.q) {
            // p ≤ q < ∞: saturation without a log at the threshold.
            if gamma.lt3(thresh) {
                AsymTerm::power(thresh - gamma)
            } else {
                AsymTerm::constant()
            }
        } else {
            // 2 ≤ q < p: the threshold itself costs log(M+1)^{1/q − 1/p}.
            if gamma.lt3(thresh) {
                AsymTerm::power(thresh - gamma)
            } else if gamma.eq3(thresh) {
                AsymTerm::with_log_at_infinity(Real::ZERO, e.inv_q() - e.inv_p())
            } else {
                AsymTerm::constant()
            }
        }
    };
    Ok(AsymProfile::finite(AsymTerm::constant(), large))
}
