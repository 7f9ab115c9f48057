//! Weighted line norms of products `E(u) * T(u)` where `T` is 1-periodic
//! (a trigonometric polynomial) and `E` is a smooth envelope times a power
//! weight.
//!
//! The integral over the line splits over unit cells,
//! `int |E T|^q = sum_j int_0^1 |T(v)|^q |E(j+v)|^q dv`, so the envelope
//! enters only through its periodization `P(v) = sum_j |E(j+v)|^q`. `P` is
//! evaluated exactly on a 1/64-spaced grid (reusing one dense envelope
//! table) and interpolated onto the synthesis grid of `T`; `T` itself is
//! synthesized by one FFT. This keeps the cost at one pass over the
//! envelope table plus `O(G)` per polynomial, independent of how far the
//! envelope reaches.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::norms::{NormError, TrigPoly};
use crate::oracle::Lp;

/// Envelope table resolution per unit length. Matches the tabulation step
/// of the window transform (1/32) with one extra dyadic level.
pub(crate) const NODES_PER_UNIT: usize = 64;

/// Truncation radius for the spread window `dual_profile`: beyond this the
/// window is below 1e-10 and decaying superpolynomially, so even against
/// the polynomial weights in play the discarded mass is negligible
/// relative to the bulk near the origin.
pub(crate) const SPREAD_WINDOW_REACH: u32 = 320;

/// `|T(i/g)|` for `i = 0..g` by one inverse FFT; requires `d = 1` and
/// `g >= 2 deg + 1`.
pub(crate) fn synth_abs(t: &TrigPoly, g: usize) -> Result<Vec<f64>, NormError> {
    if t.d() != 1 {
        return Err(NormError::Dimension(t.d()));
    }
    if g < (2 * t.degree() + 1) as usize {
        return Err(NormError::Invalid(format!(
            "synthesis grid {g} under-resolves degree {}",
            t.degree()
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); g];
    for (n, c) in t.terms() {
        buf[n[0].rem_euclid(g as i64) as usize] += c;
    }
    FftPlanner::new().plan_fft_inverse(g).process(&mut buf);
    Ok(buf.into_iter().map(|z| z.norm()).collect())
}

/// Synthesis grid length for a polynomial: `mult` samples per mode,
/// floored at 4096 and rounded to a power of two.
pub(crate) fn fine_grid_len(t: &TrigPoly, mult: usize) -> usize {
    (mult * (2 * t.degree() as usize + 1))
        .max(4096)
        .next_power_of_two()
}

/// Dense table of a nonnegative envelope on `[-reach, reach)` at
/// [`NODES_PER_UNIT`] spacing, with periodic-safe cubic interpolation.
pub(crate) struct EnvelopeTable {
    reach: u32,
    vals: Vec<f64>,
}

impl EnvelopeTable {
    pub(crate) fn build(h: impl Fn(f64) -> f64, reach: u32) -> Self {
        let n = 2 * reach as usize * NODES_PER_UNIT;
        let vals = (0..n)
            .map(|m| {
                let x = -(reach as f64) + m as f64 / NODES_PER_UNIT as f64;
                h(x).abs()
            })
            .collect();
        EnvelopeTable { reach, vals }
    }

    /// `P(v) = sum_j h(j+v)^q` on the 1/64 grid `v = k/64`; exact at the
    /// table nodes because every `j + k/64` is itself a node.
    fn periodized_power(&self, q: f64) -> Vec<f64> {
        let mut row = vec![0.0; NODES_PER_UNIT];
        for (m, &v) in self.vals.iter().enumerate() {
            if v > 0.0 {
                row[m % NODES_PER_UNIT] += v.powf(q);
            }
        }
        row
    }

    /// Largest table value in `[u - w, u + w]`, a search bracket for sup
    /// refinement.
    fn local_max(&self, u: f64, w: f64) -> f64 {
        let lo = ((u - w + self.reach as f64) * NODES_PER_UNIT as f64).floor() as i64;
        let hi = ((u + w + self.reach as f64) * NODES_PER_UNIT as f64).ceil() as i64;
        (lo..=hi)
            .filter_map(|m| {
                if (0..self.vals.len() as i64).contains(&m) {
                    Some(self.vals[m as usize])
                } else {
                    None
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Periodic Catmull-Rom resampling of `coarse` onto `g` points.
fn resample_periodic(coarse: &[f64], g: usize) -> Vec<f64> {
    let n = coarse.len();
    let at = |i: i64| coarse[i.rem_euclid(n as i64) as usize];
    (0..g)
        .map(|k| {
            let a = k as f64 * n as f64 / g as f64;
            let i = a.floor() as i64;
            let f = a - i as f64;
            let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
            let v = 0.5
                * (2.0 * p1
                    + (p2 - p0) * f
                    + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * f * f
                    + (3.0 * (p1 - p2) + p3 - p0) * f * f * f);
            v.max(0.0)
        })
        .collect()
}

/// `(1/g sum_i t_abs[i]^q row[i] * scale)^{1/q}` where `row` is the
/// periodized envelope power already aligned to the synthesis grid.
pub(crate) fn norm_from_row(t_abs: &[f64], row: &[f64], scale: f64, q: f64) -> f64 {
    let sum: f64 = t_abs
        .iter()
        .zip(row)
        .map(|(&tv, &pv)| if tv > 0.0 { tv.powf(q) * pv } else { 0.0 })
        .sum();
    (scale * sum / t_abs.len() as f64).powf(1.0 / q)
}

/// `row[i] = P(i/g)` for the envelope table at power `q`.
pub(crate) fn envelope_power_row(table: &EnvelopeTable, q: f64, g: usize) -> Vec<f64> {
    resample_periodic(&table.periodized_power(q), g)
}

/// `|| x -> h(x/scale) T(x/scale) ||_{L^q(dx)}` where `h` must already
/// contain both the envelope and the weight as a function of `u = x/scale`.
/// For `q = inf` the grid guess is polished by golden-section refinement on
/// the exact product.
pub(crate) fn envelope_product_norm(
    t: &TrigPoly,
    scale: f64,
    h: &dyn Fn(f64) -> f64,
    reach: u32,
    q: Lp,
    mult: usize,
) -> Result<f64, NormError> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(NormError::Invalid(format!(
            "dilation must be positive and finite, got {scale}"
        )));
    }
    if t.is_empty() {
        return Ok(0.0);
    }
    let table = EnvelopeTable::build(h, reach);
    let g = fine_grid_len(t, mult);
    let t_abs = synth_abs(t, g)?;
    if q.is_inf() {
        return periodized_sup(t, &t_abs, &table, h);
    }
    let qf = q.to_f64();
    let row = envelope_power_row(&table, qf, g);
    Ok(norm_from_row(&t_abs, &row, scale, qf))
}

/// Supremum of `|h(u) T(u)|`: a grid scan over all unit cells within the
/// table reach ranks candidates by `|T| * h`, and the best few are polished
/// on the exact product. The dilation drops out of the supremum.
fn periodized_sup(
    t: &TrigPoly,
    t_abs: &[f64],
    table: &EnvelopeTable,
    h: &dyn Fn(f64) -> f64,
) -> Result<f64, NormError> {
    let g = t_abs.len();
    let reach = table.reach as i64;
    // Peak |T| per coarse v-cell, so each unit cell is scanned at coarse
    // resolution without losing narrow polynomial peaks.
    let cells = NODES_PER_UNIT;
    let mut t_cell_max = vec![0.0f64; cells];
    for (i, &tv) in t_abs.iter().enumerate() {
        let k = i * cells / g;
        if tv > t_cell_max[k] {
            t_cell_max[k] = tv;
        }
    }
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for j in -reach..reach {
        for k in 0..cells {
            let m = ((j + reach) as usize) * cells + k;
            let env = table.vals[m];
            if env <= 0.0 {
                continue;
            }
            let u = j as f64 + (k as f64 + 0.5) / cells as f64;
            let score = t_cell_max[k] * table.local_max(u, 1.0 / cells as f64);
            if score > 0.0 {
                candidates.push((score, u));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    candidates.truncate(24);
    let exact = |u: f64| -> Result<f64, NormError> {
        Ok(t.eval_1d(u)?.norm() * h(u).abs())
    };
    let mut best = 0.0f64;
    let half = 1.5 / cells as f64;
    for &(_, u0) in &candidates {
        let (mut lo, mut hi) = (u0 - half, u0 + half);
        best = best.max(exact(u0)?);
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            let (v1, v2) = (exact(m1)?, exact(m2)?);
            best = best.max(v1).max(v2);
            if v1 < v2 {
                lo = m1;
            } else {
                hi = m2;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::bump::{compact_profile, dual_profile};
    use crate::norms::{integrate, weighted_lq_norm, ClosedFormFn, QuadOpts};
    use crate::real::Ext;
    use crate::weights::BrokenWeight;
    use num_complex::Complex64;

    fn two_mode() -> TrigPoly {
        let mut t = TrigPoly::new(1, 3).unwrap();
        t.set(&[0], Complex64::new(1.0, 0.0)).unwrap();
        t.set(&[2], Complex64::new(0.5, -0.25)).unwrap();
        t
    }

    #[test]
    fn matches_direct_quadrature_on_a_compact_envelope() {
        // Envelope supported on one unit cell keeps the direct integral
        // cheap; the periodized path must agree to grid accuracy.
        let t = two_mode();
        for qf in [1.0, 2.0, 4.0] {
            let q = if qf == 1.0 {
                Lp::int(1)
            } else if qf == 2.0 {
                Lp::int(2)
            } else {
                Lp::int(4)
            };
            let h = |u: f64| compact_profile(u);
            let got = envelope_product_norm(&t, 1.0, &h, 4, q, 32).unwrap();
            let want = integrate(
                |u| {
                    let v = t.eval_1d(u).unwrap().norm() * compact_profile(u);
                    v.powf(qf) + {
                        let w = t.eval_1d(-u).unwrap().norm() * compact_profile(-u);
                        w.powf(qf)
                    }
                },
                0.0,
                0.25,
                &QuadOpts::default(),
            )
            .value
            .powf(1.0 / qf);
            assert!(
                (got - want).abs() <= 2e-4 * want,
                "q = {qf}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn matches_the_closed_form_path_on_a_modulated_bump() {
        // Cross-check against the adaptive line quadrature used by the
        // closed-form family, including a broken weight and a dilation.
        let t = two_mode();
        let w = BrokenWeight::new(1, crate::real::Real::ratio(1, 2));
        for &scale in &[0.5, 2.0] {
            let f = ClosedFormFn::modulated_bump(scale, t.clone()).unwrap();
            let Ext::Finite(want) = weighted_lq_norm(&f, &w, Lp::int(2), 1).unwrap() else {
                panic!("finite norm expected");
            };
            let h = |u: f64| dual_profile(u) * w.eval_pos((scale * u).abs());
            let got =
                envelope_product_norm(&t, scale, &h, SPREAD_WINDOW_REACH, Lp::int(2), 32).unwrap();
            assert!(
                (got - want).abs() <= 2e-3 * want,
                "scale {scale}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn sup_path_matches_the_closed_form_sup() {
        let t = two_mode();
        let f = ClosedFormFn::modulated_bump(1.0, t.clone()).unwrap();
        let w = BrokenWeight::new(0, 0);
        let Ext::Finite(want) = weighted_lq_norm(&f, &w, Lp::Inf, 1).unwrap() else {
            panic!("finite sup expected");
        };
        let h = |u: f64| dual_profile(u).abs();
        let got = envelope_product_norm(&t, 1.0, &h, SPREAD_WINDOW_REACH, Lp::Inf, 32).unwrap();
        assert!(
            (got - want).abs() <= 1e-4 * want,
            "got {got}, want {want}"
        );
    }

    #[test]
    fn empty_polynomial_has_zero_norm() {
        let t = TrigPoly::new(1, 2).unwrap();
        let h = |u: f64| dual_profile(u).abs();
        let got = envelope_product_norm(&t, 1.0, &h, 8, Lp::int(2), 16).unwrap();
        assert_eq!(got, 0.0);
    }
}
