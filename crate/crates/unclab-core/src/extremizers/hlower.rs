//! Constructive lower bounds for the profile governing the additive
//! two-weight inequality: points `(abscissa, ordinate)` with
//! `abscissa = ||f w_a||_q / ||fhat w_b||_p` and
//! `ordinate = ||f||_q / ||fhat w_b||_p`, so any valid profile must pass
//! above every returned point.
//!
//! Each witness is a modulated bump whose modes come from the estimated
//! discrete constant at the matching weight branch: dilating by `t`
//! places the transform-side frequencies `(1 + |n|)/t` on the `b.a1`
//! branch when the target abscissa exceeds 1 (then `t` grows with the
//! target and the mode count tracks `t`), and on the `b.a2` branch below
//! 1 (then `t` shrinks, chosen from the estimated constant so the
//! abscissa lands near the target, and the ordinate inherits the
//! constant's growth in the mode count).

use super::modulated::build_modulated;
use super::ExtremizerError;
use crate::norms::TrigPoly;
use crate::oracle::ExponentPair;
use crate::sharp::{estimate_discrete_constant, Budget, Witness};
use crate::weights::BrokenWeight;

/// Knobs for the per-point witness search.
#[derive(Debug, Clone)]
pub struct HOptions {
    pub budget: Budget,
    pub seed: u64,
    /// Fixed mode count for every point; `None` derives it from the
    /// target abscissa.
    pub degree: Option<i64>,
}

impl Default for HOptions {
    fn default() -> Self {
        HOptions {
            budget: Budget::default(),
            seed: 0x4861,
            degree: None,
        }
    }
}

fn to_f(r: crate::real::Real) -> f64 {
    r.to_f64()
}

/// `(abscissa, ordinate)` of one modulated-bump witness, both normalized
/// by its transform-side weighted norm.
fn normalized_pair(
    e: ExponentPair,
    a: &BrokenWeight,
    b: &BrokenWeight,
    t: f64,
    coeffs: &TrigPoly,
) -> Result<(f64, f64), ExtremizerError> {
    let fam = build_modulated(1, t, coeffs.clone())?;
    let z = fam.xi_norm(b, e.p)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(ExtremizerError::Degenerate);
    }
    let flat = BrokenWeight::new(0, 0);
    let abscissa = fam.x_norm(a, e.q)? / z;
    let ordinate = fam.x_norm(&flat, e.q)? / z;
    Ok((abscissa, ordinate))
}

pub fn lower_bound_h(
    d: u32,
    e: ExponentPair,
    a: &BrokenWeight,
    b: &BrokenWeight,
    xs: &[f64],
) -> Result<Vec<(f64, f64)>, ExtremizerError> {
    lower_bound_h_with(d, e, a, b, xs, &HOptions::default())
}

/// One witness point per target abscissa in `xs`.
pub fn lower_bound_h_with(
    d: u32,
    e: ExponentPair,
    a: &BrokenWeight,
    b: &BrokenWeight,
    xs: &[f64],
    opts: &HOptions,
) -> Result<Vec<(f64, f64)>, ExtremizerError> {
    if d != 1 {
        return Err(ExtremizerError::Invalid(format!(
            "witness construction is univariate, got d = {d}"
        )));
    }
    for w in [a, b] {
        if to_f(w.a1) < 0.0 || to_f(w.a2) < 0.0 {
            return Err(ExtremizerError::Invalid(
                "weight exponents must be nonnegative".into(),
            ));
        }
    }
    if xs.is_empty() {
        return Err(ExtremizerError::Invalid(
            "at least one target abscissa is required".into(),
        ));
    }
    let sum_inv = e.q.inv().to_f64() + e.p.inv().to_f64() - 1.0;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if !(x > 0.0) || !x.is_finite() {
            return Err(ExtremizerError::Invalid(format!(
                "target abscissa must be positive and finite, got {x}"
            )));
        }
        let (t, coeffs) = if x > 1.0 {
            let gamma = to_f(b.a1);
            let grow = sum_inv + gamma + to_f(a.a2);
            if grow <= 0.0 {
                return Err(ExtremizerError::Invalid(format!(
                    "no growing dilation: exponent balance {grow} is not positive"
                )));
            }
            let (m, t) = match opts.degree {
                Some(m) => (m.max(1), m.max(1) as f64),
                None => {
                    let t = x.powf(1.0 / grow);
                    (t.ceil() as i64, t)
                }
            };
            let est = estimate_discrete_constant(1, e, gamma, m, &opts.budget, opts.seed)?;
            let Witness::Modes(coeffs) = est.lower_bound_witness else {
                return Err(ExtremizerError::Invalid(
                    "expected a mode witness from the discrete estimate".into(),
                ));
            };
            (t, coeffs)
        } else {
            let gamma = to_f(b.a2);
            let shrink = sum_inv + gamma + to_f(a.a1);
            if shrink <= 0.0 {
                return Err(ExtremizerError::Invalid(format!(
                    "no shrinking dilation: exponent balance {shrink} is not positive"
                )));
            }
            let m = opts.degree.unwrap_or(32).max(1);
            let est = estimate_discrete_constant(1, e, gamma, m, &opts.budget, opts.seed)?;
            if !(est.value > 0.0) || !est.value.is_finite() {
                return Err(ExtremizerError::Degenerate);
            }
            let Witness::Modes(coeffs) = est.lower_bound_witness else {
                return Err(ExtremizerError::Invalid(
                    "expected a mode witness from the discrete estimate".into(),
                ));
            };
            ((x / est.value).powf(1.0 / shrink), coeffs)
        };
        out.push(normalized_pair(e, a, b, t, &coeffs)?);
    }
    Ok(out)
}
