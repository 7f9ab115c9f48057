//! Growth profile of the best constant in the localized estimate
//!
//! ```text
//! ‖f‖_{L^q(|x| ≤ t)} ≤ C(t) · ‖f̂ · ξ^W‖_p
//! ```
//!
//! as a function of the ball radius t, for a nonnegative broken weight W on
//! the Fourier side. The profile is piecewise power-log in t with different
//! shapes below and above radius 1, and is Infinite whenever no finite
//! constant exists for some t.

use crate::real::Real;
use crate::weights::BrokenWeight;

use super::exponents::ExponentPair;
use super::profile::{AsymProfile, AsymTerm};
use super::OracleError;

/// Computes the growth profile in t of the best constant C(t) above.
///
/// `w` is the Fourier-side broken weight; both powers must be ≥ 0. The case
/// split is on the position of (p, q): p = 1 and q = ∞ degenerate, p ≤ q,
/// and two shapes of q < p separated by max(q, p′) against 2.
pub fn local_constant_profile(
    d: u32,
    e: ExponentPair,
    w: BrokenWeight,
) -> Result<AsymProfile, OracleError> {
    if !w.is_nonnegative() {
        return Err(OracleError::NegativeWeight(format!("W = {w}")));
    }
    let dim = Real::int(d as i64);
    // Exponent thresholds; thresh < dpp always (their gap is d/q).
    let thresh = dim * (Real::ONE - e.inv_p() - e.inv_q());
    let dpp = dim * e.inv_p_prime();

    // Degenerate endpoint: only the weight-free head survives, and the
    // constant then grows like the plain volume factor t^{d/q} at all radii.
    if e.p.eq_int(1) {
        return Ok(if w.a1.eq3(Real::ZERO) {
            AsymProfile::pure_power(dim * e.inv_q())
        } else {
            AsymProfile::Infinite
        });
    }

    // Sup-norm target: finite exactly when the weight straddles d/p′.
    if e.q.is_inf() {
        return Ok(if w.a1.lt3(dpp) && dpp.lt3(w.a2) {
            AsymProfile::pure_power(Real::ZERO)
        } else {
            AsymProfile::Infinite
        });
    }

    // Small radii are governed by the tail power W₂ against d/p′ in every
    // remaining case.
    let small = if w.a2.lt3(dpp) {
        AsymTerm::power(w.a2 - thresh)
    } else if w.a2.eq3(dpp) {
        AsymTerm::with_log_near_zero(dim * e.inv_q(), e.inv_p_prime())
    } else {
        AsymTerm::power(dim * e.inv_q())
    };

    if e.p.le(e.q) {
        // 1 < p ≤ q < ∞: tail may sit exactly on the threshold.
        if !(w.a2.ge3(thresh) && w.a1.lt3(dpp)) {
            return Ok(AsymProfile::Infinite);
        }
        let large = if w.a1.ge3(thresh) {
            AsymTerm::power(w.a1 - thresh)
        } else {
            AsymTerm::constant()
        };
        return Ok(AsymProfile::finite(small, large));
    }

    if e.q.ge_int(2) || e.p.le_int(2) {
        // q < p with max(q, p′) ≥ 2: strict tail threshold, and sitting on
        // the head threshold costs a log of exponent 1/r, 1/r = 1/q − 1/p.
        if !(w.a2.gt3(thresh) && w.a1.lt3(dpp)) {
            return Ok(AsymProfile::Infinite);
        }
        let large = if w.a1.gt3(thresh) {
            AsymTerm::power(w.a1 - thresh)
        } else if w.a1.eq3(thresh) {
            AsymTerm::with_log_at_infinity(Real::ZERO, e.inv_q() - e.inv_p())
        } else {
            AsymTerm::constant()
        };
        return Ok(AsymProfile::finite(small, large));
    }

    // q < 2 < p: the head threshold moves to d(1/2 − 1/p) and the saturated
    // large-regime growth is t^{d(1/q − 1/2)}.
    let s_half = dim * (Real::ratio(1, 2) - e.inv_p());
    let sigma = dim * (e.inv_q() - Real::ratio(1, 2));
    if !(w.a2.gt3(s_half) && w.a1.lt3(dpp)) {
        return Ok(AsymProfile::Infinite);
    }
    let large = if w.a1.gt3(s_half) {
        AsymTerm::power(w.a1 - thresh)
    } else if w.a1.eq3(s_half) {
        AsymTerm::with_log_at_infinity(sigma, Real::ratio(1, 2) - e.inv_p())
    } else {
        AsymTerm::power(sigma)
    };
    Ok(AsymProfile::finite(small, large))
}
