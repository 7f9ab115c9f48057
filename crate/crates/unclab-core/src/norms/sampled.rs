//! Weighted norms of radially sampled functions with declared tails.
//!
//! A [`SampledRadialFn`] carries values on a strictly increasing radial grid
//! reaching down to 1e-4 or below, plus a descriptor for the behavior beyond
//! the last sample.  The norm integrates the samples by the trapezoid rule
//! (split at the weight kink `r = 1`), extends below the first sample by a
//! constant, and integrates the declared tail in closed form or by rapidly
//! converging quadrature.  Divergence — at the origin against a singular
//! weight, or in a declared power tail too fat for the exponent — is
//! reported as an infinite value, not an error.

use super::quad::{integrate_auto, QuadOpts};
use super::NormError;
use crate::oracle::Lp;
use crate::real::{Ext, Real};
use crate::weights::BrokenWeight;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailBehavior {
    /// `f(r) ~ f(r_max) e^{-rate (r - r_max)}` beyond the grid.
    SchwartzLike { rate: f64 },
    /// Identically zero beyond `radius`; the grid must cover the support.
    CompactSupport { radius: f64 },
    /// `f(r) ~ f(r_max) (r / r_max)^{exponent}` beyond the grid.
    PowerTail { exponent: f64 },
}

#[derive(Clone, Debug)]
pub struct SampledRadialFn {
    grid: Vec<f64>,
    values: Vec<f64>,
    tail: TailBehavior,
}

impl SampledRadialFn {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, tail: TailBehavior) -> Result<Self, NormError> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(NormError::Invalid(
                "need matching grid and value arrays with at least 2 samples".into(),
            ));
        }
        if grid.iter().any(|r| !r.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(NormError::Invalid("samples must be finite".into()));
        }
        if grid[0] <= 0.0 {
            return Err(NormError::Invalid("radii must be positive".into()));
        }
        if grid.windows(2).any(|p| p[0] >= p[1]) {
            return Err(NormError::Invalid("radii must be strictly increasing".into()));
        }
        if grid[0] > 1e-4 {
            return Err(NormError::Invalid(format!(
                "first radius {} must reach down to 1e-4",
                grid[0]
            )));
        }
        match tail {
            TailBehavior::SchwartzLike { rate } => {
                if !(rate > 0.0) || !rate.is_finite() {
                    return Err(NormError::Invalid(format!(
                        "decay rate must be positive, got {rate}"
                    )));
                }
            }
            TailBehavior::CompactSupport { radius } => {
                if !radius.is_finite() || radius > *grid.last().unwrap() {
                    return Err(NormError::Invalid(
                        "the grid must cover the declared support".into(),
                    ));
                }
                let stray = grid
                    .iter()
                    .zip(&values)
                    .any(|(&r, &v)| r > radius && v != 0.0);
                if stray {
                    return Err(NormError::Invalid(
                        "nonzero samples beyond the declared support".into(),
                    ));
                }
            }
            TailBehavior::PowerTail { exponent } => {
                if !exponent.is_finite() {
                    return Err(NormError::Invalid("tail exponent must be finite".into()));
                }
            }
        }
        Ok(SampledRadialFn { grid, values, tail })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> TailBehavior {
        self.tail
    }
}

/// `int_lo^hi r^c dr` for `lo, hi` positive and finite, handling `c = -1`.
fn power_int(c: f64, lo: f64, hi: f64) -> f64 {
    if (c + 1.0).abs() < 1e-12 {
        (hi / lo).ln()
    } else {
        (hi.powf(c + 1.0) - lo.powf(c + 1.0)) / (c + 1.0)
    }
}

/// Weighted `L^q(R^d)` norm by radial reduction with the surface factor
/// `omega_{d-1}`; see the module docs for the head, body, and tail pieces.
pub fn sampled_weighted_lq_norm(
    f: &SampledRadialFn,
    w: &BrokenWeight,
    q: Lp,
    d: u32,
) -> Result<Ext, NormError> {
    if d == 0 {
        return Err(NormError::Invalid("dimension must be at least 1".into()));
    }
    let grid = &f.grid;
    let values = &f.values;
    let last = grid.len() - 1;
    let (r_max, v_max) = (grid[last], values[last]);
    let a1 = w.a1.to_f64();
    let a2 = w.a2.to_f64();

    if q.is_inf() {
        if w.a1.lt3(Real::ZERO) && values[0] != 0.0 {
            return Ok(Ext::Infinite);
        }
        let mut best = grid
            .iter()
            .zip(values)
            .map(|(&r, &v)| v.abs() * w.eval_pos(r))
            .fold(0.0f64, f64::max);
        match f.tail {
            TailBehavior::CompactSupport { .. } => {}
            TailBehavior::PowerTail { exponent } => {
                if v_max != 0.0 && exponent + a2 > 0.0 {
                    return Ok(Ext::Infinite);
                }
            }
            TailBehavior::SchwartzLike { rate } => {
                // The extension |v| e^{-rate (r - R)} r^{a2} peaks at a2/rate.
                let r = a2 / rate;
                if r > r_max {
                    best = best.max(v_max.abs() * (-rate * (r - r_max)).exp() * w.eval_pos(r));
                }
            }
        }
        return Ok(Ext::Finite(best));
    }

    let qf = q.to_f64();
    // Head: constant extension of the first sample below the grid.
    let head = if values[0] == 0.0 {
        0.0
    } else {
        if w.a1.le3(Real::ZERO - Real::int(d as i64) * q.inv()) {
            return Ok(Ext::Infinite);
        }
        // The divergence check guarantees the exponent is > -1 here.
        values[0].abs().powf(qf) * power_int(a1 * qf + d as f64 - 1.0, 0.0, grid[0])
    };

    // Body: trapezoid on the samples, split where a cell straddles r = 1.
    let density = |r: f64, v: f64| v.abs().powf(qf) * w.eval_pos(r).powf(qf) * r.powi(d as i32 - 1);
    let mut body = 0.0;
    for k in 0..last {
        let (r0, r1) = (grid[k], grid[k + 1]);
        let (v0, v1) = (values[k], values[k + 1]);
        if r0 < 1.0 && r1 > 1.0 {
            let vm = v0 + (v1 - v0) * (1.0 - r0) / (r1 - r0);
            // At r = 1 both weight branches and the surface power equal one.
            let at_kink = vm.abs().powf(qf);
            body += 0.5 * (density(r0, v0) + at_kink) * (1.0 - r0);
            body += 0.5 * (at_kink + density(r1, v1)) * (r1 - 1.0);
        } else {
            body += 0.5 * (density(r0, v0) + density(r1, v1)) * (r1 - r0);
        }
    }

    // Tail beyond the last sample, from the declared descriptor.
    let tail = match f.tail {
        TailBehavior::CompactSupport { .. } => 0.0,
        TailBehavior::PowerTail { exponent } => {
            if v_max == 0.0 {
                0.0
            } else {
                let scale = v_max.abs().powf(qf) * r_max.powf(-exponent * qf);
                let c1 = (exponent + a1) * qf + d as f64 - 1.0;
                let c2 = (exponent + a2) * qf + d as f64 - 1.0;
                if c2 >= -1.0 - 1e-12 {
                    return Ok(Ext::Infinite);
                }
                let mut t = 0.0;
                if r_max < 1.0 {
                    t += scale * power_int(c1, r_max, 1.0);
                    t += scale * power_int(c2, 1.0, f64::INFINITY);
                } else {
                    t += scale * power_int(c2, r_max, f64::INFINITY);
                }
                t
            }
        }
        TailBehavior::SchwartzLike { rate } => {
            if v_max == 0.0 {
                0.0
            } else {
                let g = move |r: f64| {
                    (v_max.abs() * (-rate * (r - r_max)).exp()).powf(qf)
                        * w.eval_pos(r).powf(qf)
                        * r.powi(d as i32 - 1)
                };
                integrate_auto(g, r_max, &QuadOpts::default()).value
            }
        }
    };

    let omega = super::closed::surface_area(d);
    Ok(Ext::Finite((omega * (head + body + tail)).powf(1.0 / qf)))
}
