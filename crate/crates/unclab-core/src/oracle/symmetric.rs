//! Validity of the symmetric uncertainty inequality with broken power
//! weights:
//!
//! ```text
//! ‖f‖_p ‖f̂‖_{p′} ≲ ‖f · x^A‖_p ‖f̂ · ξ^B‖_{p′}
//! ```
//!
//! over f on R^d, where x^A is |x|^{A₁} inside the unit ball and |x|^{A₂}
//! outside. The classifier is normalized to p ≥ 2; for p < 2 the two factors
//! trade places under the Fourier transform, so callers swap (p, A) with
//! (p′, B) first.

use crate::real::Real;
use crate::weights::BrokenWeight;

use super::exponents::Lp;
use super::nonsym::Verdict;
use super::OracleError;

/// Decides `‖f‖_p ‖f̂‖_{p′} ≲ ‖f·x^A‖_p ‖f̂·ξ^B‖_{p′}` on R^d for p ≥ 2 and
/// coordinate-wise positive A, B.
///
/// With s = d(1/2 − 1/p), Holds iff
/// - B₂ ≥ A₁ and A₂ ≥ B₁ (otherwise dilations already defeat the bound), and
/// - A₂ > s, and
/// - one of: A₁ > s; A₁ < s with B₂² ≥ s·A₁; A₁ = s < B₂.
pub fn classify_symmetric(
    d: u32,
    p: Lp,
    a: BrokenWeight,
    b: BrokenWeight,
) -> Result<Verdict, OracleError> {
    if p.lt_int(2) {
        return Err(OracleError::SwapRoles);
    }
    if !a.is_positive() {
        return Err(OracleError::NonPositiveWeight(format!("A = {a}")));
    }
    if !b.is_positive() {
        return Err(OracleError::NonPositiveWeight(format!("B = {b}")));
    }
    let s = Real::int(d as i64) * (Real::ratio(1, 2) - p.inv());

    let ordered = b.a2.ge3(a.a1) && a.a2.ge3(b.a1);
    let tail_ok = a.a2.gt3(s);
    let head_ok = a.a1.gt3(s)
        || (a.a1.lt3(s) && (b.a2 * b.a2).ge3(s * a.a1))
        || (a.a1.eq3(s) && b.a2.gt3(s));

    Ok(if ordered && tail_ok && head_ok {
        Verdict::Holds
    } else {
        Verdict::Fails
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a1: f64, a2: f64) -> BrokenWeight {
        BrokenWeight::new(Real::from_f64(a1), Real::from_f64(a2))
    }

    #[test]
    fn classical_l2_case_holds() {
        assert_eq!(
            classify_symmetric(1, Lp::int(2), w(1.0, 1.0), w(1.0, 1.0)).unwrap(),
            Verdict::Holds
        );
    }

    #[test]
    fn small_head_power_needs_a_large_enough_tail_on_the_other_side() {
        // p = ∞, s = 1/2, A₁ = 1/4 < s: the gate is B₂² ≥ s·A₁ = 1/8.
        assert_eq!(
            classify_symmetric(1, Lp::Inf, w(0.25, 1.0), w(1.0, 0.4)).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            classify_symmetric(1, Lp::Inf, w(0.25, 1.0), w(1.0, 0.3)).unwrap(),
            Verdict::Fails
        );
    }

    #[test]
    fn dilation_ordering_is_necessary() {
        // A₂ < B₁ lets a dilation family blow up the ratio.
        assert_eq!(
            classify_symmetric(1, Lp::int(2), w(1.0, 0.2), w(0.5, 1.0)).unwrap(),
            Verdict::Fails
        );
        // B₂ < A₁ is the mirror image.
        assert_eq!(
            classify_symmetric(1, Lp::int(2), w(0.5, 1.0), w(1.0, 0.2)).unwrap(),
            Verdict::Fails
        );
    }

    #[test]
    fn boundary_head_power_needs_strict_tail() {
        // p = ∞, s = 1/2, A₁ = s: holds only with B₂ > 1/2.
        assert_eq!(
            classify_symmetric(1, Lp::Inf, w(0.5, 1.0), w(0.5, 0.75)).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            classify_symmetric(1, Lp::Inf, w(0.5, 1.0), w(0.5, 0.5)).unwrap(),
            Verdict::Fails
        );
    }

    #[test]
    fn tail_power_at_the_threshold_fails() {
        // p = 4, s = 1/4: A₂ must exceed s strictly.
        assert_eq!(
            classify_symmetric(1, Lp::int(4), w(1.0, 0.25), w(0.25, 1.0)).unwrap(),
            Verdict::Fails
        );
        assert_eq!(
            classify_symmetric(1, Lp::int(4), w(1.0, 0.3), w(0.25, 1.0)).unwrap(),
            Verdict::Holds
        );
    }

    #[test]
    fn p_below_two_is_redirected_to_the_swapped_form() {
        assert_eq!(
            classify_symmetric(1, Lp::Finite(Real::ratio(3, 2)), w(1.0, 1.0), w(1.0, 1.0)),
            Err(OracleError::SwapRoles)
        );
    }

    #[test]
    fn p_equal_two_verdict_is_swap_invariant() {
        // At p = 2 the conjugate exponent is 2 again, so exchanging the two
        // factors must not change the verdict.
        let cases = [
            (w(1.0, 1.0), w(1.0, 1.0)),
            (w(0.25, 1.0), w(1.0, 0.4)),
            (w(1.0, 0.2), w(0.5, 1.0)),
            (w(0.5, 2.0), w(0.3, 0.7)),
        ];
        for (a, b) in cases {
            let fwd = classify_symmetric(1, Lp::int(2), a, b).unwrap();
            let rev = classify_symmetric(1, Lp::int(2), b, a).unwrap();
            assert_eq!(fwd, rev, "A = {a}, B = {b}");
        }
    }
}
