//! Dilation families and the symmetric uncertainty ratio they probe.
//!
//! `symmetric_ratio` evaluates `||f||_p ||fhat||_{p'} / (||f w_a||_p
//! ||fhat w_b||_{p'})`, the quantity a product-form uncertainty
//! inequality bounds from above. Rescaling `f` trades mass between the
//! two weight branches: concentrating (`lambda -> inf`) drives the ratio
//! like `lambda^{a1 - b2}`, so a fitted slope of `log ratio` against
//! `log lambda` reads off that exponent gap, and a positive gap is a
//! one-parameter witness that no uniform bound exists.

use super::ExtremizerError;
use crate::norms::{fourier_transform, weighted_lq_norm, ClosedFormFn};
use crate::oracle::Lp;
use crate::real::Ext;
use crate::weights::BrokenWeight;

fn ext_product(x: Ext, y: Ext) -> Result<Ext, ExtremizerError> {
    match (x, y) {
        (Ext::Finite(a), Ext::Finite(b)) => Ok(Ext::Finite(a * b)),
        (Ext::Finite(v), Ext::Infinite) | (Ext::Infinite, Ext::Finite(v)) => {
            if v == 0.0 {
                Err(ExtremizerError::Invalid(
                    "norm product of the form 0 * infinity is indeterminate".into(),
                ))
            } else {
                Ok(Ext::Infinite)
            }
        }
        (Ext::Infinite, Ext::Infinite) => Ok(Ext::Infinite),
    }
}

/// `||f||_p ||fhat||_{p'} / (||f w_a||_p ||fhat w_b||_{p'})`.
///
/// A vanishing witness is an error; an infinite weighted side gives 0, a
/// vanishing weighted side with nonvanishing plain side gives infinity,
/// and an infinity on both sides is reported as indeterminate.
pub fn symmetric_ratio(
    f: &ClosedFormFn,
    d: u32,
    p: Lp,
    a: &BrokenWeight,
    b: &BrokenWeight,
) -> Result<f64, ExtremizerError> {
    let pd = p.conjugate();
    let flat = BrokenWeight::new(0, 0);
    let fhat = fourier_transform(f, d)?;
    let num = ext_product(
        weighted_lq_norm(f, &flat, p, d)?,
        weighted_lq_norm(&fhat, &flat, pd, d)?,
    )?;
    let den = ext_product(
        weighted_lq_norm(f, a, p, d)?,
        weighted_lq_norm(&fhat, b, pd, d)?,
    )?;
    match (num, den) {
        (Ext::Finite(n), Ext::Finite(dv)) => {
            if n == 0.0 && dv == 0.0 {
                Err(ExtremizerError::Degenerate)
            } else if dv == 0.0 {
                Ok(f64::INFINITY)
            } else {
                Ok(n / dv)
            }
        }
        (Ext::Finite(_), Ext::Infinite) => Ok(0.0),
        (Ext::Infinite, Ext::Finite(dv)) => {
            if dv == 0.0 {
                Err(ExtremizerError::Invalid(
                    "both sides of the ratio are degenerate".into(),
                ))
            } else {
                Ok(f64::INFINITY)
            }
        }
        (Ext::Infinite, Ext::Infinite) => Err(ExtremizerError::Invalid(
            "ratio of two infinite norm products is indeterminate".into(),
        )),
    }
}

/// `x -> f(lambda x)`, closed under the families whose parameters absorb
/// a dilation: Gaussians and modulated bumps.
pub fn dilate(f: &ClosedFormFn, lambda: f64) -> Result<ClosedFormFn, ExtremizerError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(ExtremizerError::Invalid(format!(
            "dilation parameter must be positive and finite, got {lambda}"
        )));
    }
    match f {
        ClosedFormFn::Gaussian { width, amp } => {
            Ok(ClosedFormFn::gaussian_scaled(width / lambda, *amp)?)
        }
        ClosedFormFn::ModulatedBump { t, coeffs } => {
            Ok(ClosedFormFn::modulated_bump(t / lambda, coeffs.clone())?)
        }
        _ => Err(ExtremizerError::Invalid(
            "dilation is closed only for Gaussians and modulated bumps".into(),
        )),
    }
}

/// The symmetric ratio along the dilation family `x -> f(lambda x)`,
/// returned as `(lambda, ratio)` pairs ready for a log-log slope fit.
/// The member at `lambda = 1` is `f` itself.
pub fn scaling_family_ratio(
    f: &ClosedFormFn,
    d: u32,
    p: Lp,
    a: &BrokenWeight,
    b: &BrokenWeight,
    lambdas: &[f64],
) -> Result<Vec<(f64, f64)>, ExtremizerError> {
    if lambdas.is_empty() {
        return Err(ExtremizerError::Invalid(
            "at least one dilation parameter is required".into(),
        ));
    }
    let mut out = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let ratio = if lam == 1.0 {
            symmetric_ratio(f, d, p, a, b)?
        } else {
            symmetric_ratio(&dilate(f, lam)?, d, p, a, b)?
        };
        out.push((lam, ratio));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::TrigPoly;
    use crate::sharp::{fit_power_log, Regime};
    use std::f64::consts::PI;

    fn gaussian() -> ClosedFormFn {
        ClosedFormFn::gaussian(1.0).unwrap()
    }

    fn w(a1: f64, a2: f64) -> BrokenWeight {
        BrokenWeight::new(
            crate::real::Real::from_f64(a1),
            crate::real::Real::from_f64(a2),
        )
    }

    #[test]
    fn gaussian_attains_the_heisenberg_constant() {
        let r = symmetric_ratio(&gaussian(), 1, Lp::int(2), &w(1.0, 1.0), &w(1.0, 1.0)).unwrap();
        let want = 4.0 * PI;
        assert!((r - want).abs() <= 1e-6 * want, "got {r}, want {want}");
    }

    #[test]
    fn zero_witness_is_degenerate() {
        let zero = ClosedFormFn::modulated_bump(1.0, TrigPoly::new(1, 2).unwrap()).unwrap();
        assert!(matches!(
            symmetric_ratio(&zero, 1, Lp::int(2), &w(1.0, 1.0), &w(1.0, 1.0)),
            Err(ExtremizerError::Degenerate)
        ));
    }

    #[test]
    fn ratio_is_dilation_invariant_for_unbroken_weights() {
        let base = symmetric_ratio(&gaussian(), 1, Lp::int(2), &w(1.0, 1.0), &w(1.0, 1.0)).unwrap();
        for &lam in &[0.25, 1.0, 7.0] {
            let g = dilate(&gaussian(), lam).unwrap();
            let r = symmetric_ratio(&g, 1, Lp::int(2), &w(1.0, 1.0), &w(1.0, 1.0)).unwrap();
            assert!(
                (r - base).abs() <= 1e-6 * base,
                "lambda = {lam}: got {r}, base {base}"
            );
        }
    }

    #[test]
    fn family_slope_matches_the_exponent_gap() {
        let pairs = scaling_family_ratio(
            &gaussian(),
            1,
            Lp::int(2),
            &w(1.0, 1.0),
            &w(0.5, 0.5),
            &[4.0, 16.0, 64.0, 256.0],
        )
        .unwrap();
        let fit = fit_power_log(&pairs, Regime::Large).unwrap();
        assert!(
            (fit.power - 0.5).abs() <= 0.05,
            "fitted slope {}, want 0.5",
            fit.power
        );
    }

    #[test]
    fn identity_member_is_exact() {
        let f = gaussian();
        let pairs =
            scaling_family_ratio(&f, 1, Lp::int(2), &w(1.0, 1.0), &w(0.5, 0.5), &[1.0]).unwrap();
        let direct = symmetric_ratio(&f, 1, Lp::int(2), &w(1.0, 1.0), &w(0.5, 0.5)).unwrap();
        assert_eq!(pairs, vec![(1.0, direct)]);
    }

    #[test]
    fn matched_weights_give_a_constant_family() {
        let pairs = scaling_family_ratio(
            &gaussian(),
            1,
            Lp::int(2),
            &w(1.0, 1.0),
            &w(1.0, 1.0),
            &[4.0, 16.0, 64.0, 256.0],
        )
        .unwrap();
        let base = 4.0 * PI;
        for &(lam, r) in &pairs {
            assert!(
                (r - base).abs() <= 1e-3 * base,
                "lambda = {lam}: ratio {r} drifted from {base}"
            );
        }
    }

    #[test]
    fn dilation_is_rejected_off_the_closed_families() {
        let f = ClosedFormFn::peak_plus_tail(1.0, vec![(2, 1.0)]).unwrap();
        assert!(dilate(&f, 2.0).is_err());
    }
}
