//! The peak-plus-tail family: a concentrated spike `s phi(s x)` plus
//! lattice translates `sum_n c_n phi(x - n)` of the compact bump, the
//! witness shape whose transform-side mass is driven by random signs on
//! the tail.
//!
//! The pieces have disjoint supports, so space-side norms are exact
//! closed forms (plain weights) or single-bump integrals (broken
//! weights). The transform is `dual(xi/s) + dual(xi) sum_n eps_n c_n
//! e^{-2 pi i n xi}`, and its expected weighted norms are estimated by a
//! split evaluator: the spike term and the tail term are integrated
//! separately and the cross term is dropped. The cross term has zero mean
//! over the signs (exactly so at exponent 2), and per member it is second
//! order in the smaller of the two parts, so ladder slopes fitted through
//! these moments are biased well below the growth rates they resolve.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use super::modulated::{compact_window_mass, spread_window_mass};
use super::periodized::{envelope_power_row, EnvelopeTable, SPREAD_WINDOW_REACH};
use super::ExtremizerError;
use crate::norms::bump::{compact_profile, dual_profile, COMPACT_SUPPORT};
use crate::norms::{fourier_transform, integrate, ClosedFormFn, QuadOpts};
use crate::oracle::Lp;
use crate::weights::BrokenWeight;

/// Spike scale `s = peak` plus signed base amplitudes on integer sites.
#[derive(Debug, Clone)]
pub struct PeakPlusTailFamily {
    peak: i64,
    sites: Vec<(i64, f64)>,
}

/// Sample moments of the transform-side norms over random sign draws,
/// reported for the `power`-th powers of the plain and weighted norms.
#[derive(Debug, Clone, Copy)]
pub struct HatMoments {
    pub power: f64,
    pub plain_mean: f64,
    pub plain_stderr: f64,
    pub weighted_mean: f64,
    pub weighted_stderr: f64,
    pub draws: usize,
}

impl HatMoments {
    pub fn plain_norm(&self) -> f64 {
        self.plain_mean.powf(1.0 / self.power)
    }

    pub fn weighted_norm(&self) -> f64 {
        self.weighted_mean.powf(1.0 / self.power)
    }

    /// Standard error of `ln(plain_norm / weighted_norm)` by first-order
    /// propagation of the two mean errors.
    pub fn ln_ratio_stderr(&self) -> f64 {
        let rp = self.plain_stderr / self.plain_mean;
        let rw = self.weighted_stderr / self.weighted_mean;
        (rp * rp + rw * rw).sqrt() / self.power
    }
}

fn check_weight(w: &BrokenWeight) -> Result<(), ExtremizerError> {
    if w.a1.to_f64() < 0.0 || w.a2.to_f64() < 0.0 {
        return Err(ExtremizerError::Invalid(
            "weight exponents must be nonnegative on this evaluation path".into(),
        ));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<(), ExtremizerError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(ExtremizerError::Invalid(format!(
            "weight dilation must be positive and finite, got {lambda}"
        )));
    }
    Ok(())
}

/// Composite Simpson rule with an even number of panels.
fn simpson(g: &impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    debug_assert!(panels >= 2 && panels % 2 == 0);
    let h = (hi - lo) / panels as f64;
    let mut sum = g(lo) + g(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g(lo + i as f64 * h);
    }
    sum * h / 3.0
}

/// Adaptive integral split at the interior points of `cuts`.
fn integrate_cuts(g: &impl Fn(f64) -> f64, cuts: &[f64], opts: &QuadOpts) -> f64 {
    cuts.windows(2)
        .map(|w| {
            if w[1] > w[0] {
                integrate(g, w[0], w[1], opts).value
            } else {
                0.0
            }
        })
        .sum()
}

/// Golden-section maximum refinement on `[lo, hi]`.
fn refine_max(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut best = g(lo).max(g(hi));
    for _ in 0..70 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let (v1, v2) = (g(m1), g(m2));
        best = best.max(v1).max(v2);
        if v1 < v2 {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best
}

impl PeakPlusTailFamily {
    /// `peak >= 1` is the spike scale; sites are distinct nonzero integers
    /// with finite, possibly signed, base amplitudes.
    pub fn new(peak: i64, sites: Vec<(i64, f64)>) -> Result<Self, ExtremizerError> {
        if peak < 1 {
            return Err(ExtremizerError::Invalid(format!(
                "peak scale must be at least 1, got {peak}"
            )));
        }
        let mut sorted = sites;
        sorted.sort_by_key(|&(n, _)| n);
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ExtremizerError::Invalid(format!(
                    "duplicate site {}",
                    w[0].0
                )));
            }
        }
        for &(n, c) in &sorted {
            if n == 0 {
                return Err(ExtremizerError::Invalid(
                    "site 0 would collide with the spike".into(),
                ));
            }
            if !c.is_finite() {
                return Err(ExtremizerError::Invalid(format!(
                    "amplitude at site {n} is not finite"
                )));
            }
        }
        Ok(PeakPlusTailFamily {
            peak,
            sites: sorted,
        })
    }

    pub fn peak(&self) -> i64 {
        self.peak
    }

    pub fn sites(&self) -> &[(i64, f64)] {
        &self.sites
    }

    pub fn max_site(&self) -> i64 {
        self.sites.iter().map(|&(n, _)| n.abs()).max().unwrap_or(0)
    }

    pub fn d(&self) -> u32 {
        1
    }

    pub fn f(&self) -> ClosedFormFn {
        ClosedFormFn::peak_plus_tail(self.peak as f64, self.sites.clone())
            .expect("inputs validated at construction")
    }

    pub fn f_hat(&self) -> ClosedFormFn {
        fourier_transform(&self.f(), 1).expect("peak plus tail has a closed transform")
    }

    /// The member with amplitudes `signs[k] * c_k` in site order.
    pub fn f_with_signs(&self, signs: &[f64]) -> Result<ClosedFormFn, ExtremizerError> {
        if signs.len() != self.sites.len() {
            return Err(ExtremizerError::Invalid(format!(
                "{} signs for {} sites",
                signs.len(),
                self.sites.len()
            )));
        }
        let flipped: Vec<(i64, f64)> = self
            .sites
            .iter()
            .zip(signs)
            .map(|(&(n, c), &s)| (n, c * s))
            .collect();
        Ok(ClosedFormFn::peak_plus_tail(self.peak as f64, flipped)?)
    }

    /// Relative overlap of the spike support with the site supports. The
    /// spike lives in `|x| <= 1/(4 peak)` and every site bump in
    /// `[n - 1/4, n + 1/4]` with `|n| >= 1`, so this is identically zero.
    pub fn overlap_relative(&self) -> f64 {
        let spike_edge = COMPACT_SUPPORT / self.peak as f64;
        let nearest = self
            .sites
            .iter()
            .map(|&(n, _)| n.abs())
            .min()
            .unwrap_or(i64::MAX);
        if nearest < i64::MAX {
            debug_assert!(nearest as f64 - COMPACT_SUPPORT > spike_edge);
        }
        0.0
    }

    /// `||f||_p` in closed form: the disjoint pieces contribute
    /// `peak^{p-1}` and `|c_n|^p`, all carrying the window mass.
    pub fn x_norm_plain(&self, p: Lp) -> f64 {
        let s = self.peak as f64;
        if p.is_inf() {
            let cmax = self.sites.iter().fold(0.0, |m, &(_, c)| c.abs().max(m));
            return compact_profile(0.0) * s.max(cmax);
        }
        let pf = p.to_f64();
        let sum: f64 =
            s.powf(pf - 1.0) + self.sites.iter().map(|&(_, c)| c.abs().powf(pf)).sum::<f64>();
        compact_window_mass(p) * sum.powf(1.0 / pf)
    }

    /// `||f w_a(| . |/lambda)||_p` by per-piece integration: adaptive on
    /// the spike (whose support may straddle the weight break), composite
    /// Simpson on each site bump split at the break.
    pub fn x_norm_weighted(
        &self,
        a: &BrokenWeight,
        lambda: f64,
        p: Lp,
    ) -> Result<f64, ExtremizerError> {
        check_weight(a)?;
        check_lambda(lambda)?;
        let s = self.peak as f64;
        let spike_edge = COMPACT_SUPPORT / s;
        if p.is_inf() {
            let gp = |x: f64| s * compact_profile(s * x) * a.eval_pos(x / lambda);
            let mut best = 0.0f64;
            let step = spike_edge / 16.0;
            for i in 0..=16 {
                best = best.max(gp(i as f64 * step));
            }
            best = best.max(refine_max(&gp, 0.0, spike_edge));
            // Sound per-site bound: window max times the weight max over
            // the support (the weight is monotone between break points).
            let peak_env = compact_profile(0.0);
            let mut bounded: Vec<(f64, i64, f64)> = self
                .sites
                .iter()
                .filter(|&&(_, c)| c != 0.0)
                .map(|&(n, c)| {
                    let lo = (n.abs() as f64 - COMPACT_SUPPORT) / lambda;
                    let hi = (n.abs() as f64 + COMPACT_SUPPORT) / lambda;
                    let mut wmax = a.eval_pos(lo).max(a.eval_pos(hi));
                    if lo < 1.0 && 1.0 < hi {
                        wmax = wmax.max(a.eval_pos(1.0));
                    }
                    (c.abs() * peak_env * wmax, n, c)
                })
                .collect();
            bounded.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
            for &(bound, n, c) in &bounded {
                if bound <= best {
                    break;
                }
                let center = n as f64;
                let g = |x: f64| {
                    c.abs() * compact_profile(x - center) * a.eval_pos(x.abs() / lambda)
                };
                let (lo, hi) = (center - COMPACT_SUPPORT, center + COMPACT_SUPPORT);
                let step = 2.0 * COMPACT_SUPPORT / 32.0;
                let mut arg = (lo, g(lo));
                for i in 1..=32 {
                    let x = lo + i as f64 * step;
                    let v = g(x);
                    if v > arg.1 {
                        arg = (x, v);
                    }
                }
                let kink = center.signum() * lambda;
                if kink > lo && kink < hi {
                    arg = if g(kink) > arg.1 { (kink, g(kink)) } else { arg };
                }
                best = best.max(refine_max(&g, (arg.0 - step).max(lo), (arg.0 + step).min(hi)));
            }
            return Ok(best);
        }
        let pf = p.to_f64();
        let opts = QuadOpts::with_rel_tol(1e-9);
        // Spike: substitute v = peak * x; the weight break sits at
        // v = peak * lambda when inside the support.
        let gp = |v: f64| compact_profile(v).powf(pf) * a.eval_pos(v / (s * lambda)).powf(pf);
        let vbreak = (s * lambda).min(COMPACT_SUPPORT);
        let spike =
            2.0 * s.powf(pf - 1.0) * integrate_cuts(&gp, &[0.0, vbreak, COMPACT_SUPPORT], &opts);
        let mut total = spike;
        for &(n, c) in &self.sites {
            if c == 0.0 {
                continue;
            }
            let center = n as f64;
            let g = |x: f64| {
                (c.abs() * compact_profile(x - center)).powf(pf)
                    * a.eval_pos(x.abs() / lambda).powf(pf)
            };
            let (lo, hi) = (center - COMPACT_SUPPORT, center + COMPACT_SUPPORT);
            let kink = center.signum() * lambda;
            total += if kink > lo && kink < hi {
                simpson(&g, lo, kink, 64) + simpson(&g, kink, hi, 64)
            } else {
                simpson(&g, lo, hi, 128)
            };
        }
        Ok(total.powf(1.0 / pf))
    }

    /// Split-path transform norms for one explicit sign vector, returned
    /// as `(plain, weighted)` norms at exponent `pd`.
    #[cfg(test)]
    pub(crate) fn hat_norms_with_signs(
        &self,
        signs: &[f64],
        b: &BrokenWeight,
        lambda: f64,
        pd: Lp,
    ) -> Result<(f64, f64), ExtremizerError> {
        let ctx = HatContext::new(self, b, lambda, pd)?;
        if signs.len() != self.sites.len() {
            return Err(ExtremizerError::Invalid(format!(
                "{} signs for {} sites",
                signs.len(),
                self.sites.len()
            )));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); ctx.g];
        let mut pow = vec![0.0f64; ctx.g];
        let (plain, weighted) = ctx.draw_powers(self, signs, &mut buf, &mut pow);
        Ok((plain.powf(1.0 / ctx.pdf), weighted.powf(1.0 / ctx.pdf)))
    }

    /// Sample moments of `||fhat||_{pd}^{pd}` and `||fhat w_b(lambda .)
    /// ||_{pd}^{pd}` over independent sign draws on the tail.
    pub fn expected_hat_norms(
        &self,
        b: &BrokenWeight,
        lambda: f64,
        pd: Lp,
        draws: usize,
        seed: u64,
    ) -> Result<HatMoments, ExtremizerError> {
        if draws < 2 {
            return Err(ExtremizerError::Invalid(
                "at least two sign draws are required for a standard error".into(),
            ));
        }
        let ctx = HatContext::new(self, b, lambda, pd)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut buf = vec![Complex64::new(0.0, 0.0); ctx.g];
        let mut pow = vec![0.0f64; ctx.g];
        let mut signs = vec![1.0f64; self.sites.len()];
        let (mut sp, mut spp, mut sw, mut sww) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..draws {
            for s in signs.iter_mut() {
                *s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            }
            let (p, w) = ctx.draw_powers(self, &signs, &mut buf, &mut pow);
            sp += p;
            spp += p * p;
            sw += w;
            sww += w * w;
        }
        let n = draws as f64;
        let mean = |s: f64| s / n;
        let stderr = |s: f64, ss: f64| {
            let var = ((ss - s * s / n) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        };
        Ok(HatMoments {
            power: ctx.pdf,
            plain_mean: mean(sp),
            plain_stderr: stderr(sp, spp),
            weighted_mean: mean(sw),
            weighted_stderr: stderr(sw, sww),
            draws,
        })
    }
}

/// Shared per-member state of the split transform evaluator: synthesis
/// grid, periodized envelope rows, and the sign-independent spike
/// integrals.
struct HatContext {
    g: usize,
    pdf: f64,
    fft: std::sync::Arc<dyn rustfft::Fft<f64>>,
    plain_row: Vec<f64>,
    weighted_row: Vec<f64>,
    plain_spike_pow: f64,
    weighted_spike_pow: f64,
}

impl HatContext {
    fn new(
        fam: &PeakPlusTailFamily,
        b: &BrokenWeight,
        lambda: f64,
        pd: Lp,
    ) -> Result<Self, ExtremizerError> {
        check_weight(b)?;
        check_lambda(lambda)?;
        if pd.is_inf() {
            return Err(ExtremizerError::Invalid(
                "transform-side exponent must be finite for the sampled moments".into(),
            ));
        }
        let pdf = pd.to_f64();
        let g = (4 * (2 * fam.max_site() as usize + 1))
            .max(4096)
            .next_power_of_two();
        let plain_table = EnvelopeTable::build(|x: f64| dual_profile(x), SPREAD_WINDOW_REACH);
        let (b2, l2) = (*b, lambda);
        let weighted_table = EnvelopeTable::build(
            move |x: f64| dual_profile(x) * b2.eval_pos((l2 * x).abs()),
            SPREAD_WINDOW_REACH,
        );
        let s = fam.peak as f64;
        let psi = spread_window_mass(pd);
        let plain_spike_pow = s * psi.powf(pdf);
        // Spike integral in u = xi / peak: the weight break sits at
        // u = 1/(lambda peak); unit panels keep the window oscillation
        // from stalling the adaptive pass.
        let opts = QuadOpts {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            ..QuadOpts::default()
        };
        let gw = |u: f64| {
            dual_profile(u).abs().powf(pdf) * b.eval_pos(lambda * s * u).powf(pdf)
        };
        let mut cuts: Vec<f64> = (0..=SPREAD_WINDOW_REACH).map(f64::from).collect();
        let ubreak = 1.0 / (lambda * s);
        if ubreak < SPREAD_WINDOW_REACH as f64 {
            cuts.push(ubreak);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        let weighted_spike_pow = 2.0 * s * integrate_cuts(&gw, &cuts, &opts);
        Ok(HatContext {
            g,
            pdf,
            fft: FftPlanner::new().plan_fft_inverse(g),
            plain_row: envelope_power_row(&plain_table, pdf, g),
            weighted_row: envelope_power_row(&weighted_table, pdf, g),
            plain_spike_pow,
            weighted_spike_pow,
        })
    }

    /// `(||fhat||^{pd}, ||fhat w||^{pd})` for one sign vector; `buf` and
    /// `pow` are caller-owned scratch of length `g`.
    fn draw_powers(
        &self,
        fam: &PeakPlusTailFamily,
        signs: &[f64],
        buf: &mut [Complex64],
        pow: &mut [f64],
    ) -> (f64, f64) {
        let g = self.g;
        buf.fill(Complex64::new(0.0, 0.0));
        for (&(n, c), &s) in fam.sites.iter().zip(signs) {
            buf[n.rem_euclid(g as i64) as usize] += Complex64::new(c * s, 0.0);
        }
        self.fft.process(buf);
        if self.pdf == 1.0 {
            for (p, z) in pow.iter_mut().zip(buf.iter()) {
                *p = z.norm();
            }
        } else if self.pdf == 2.0 {
            for (p, z) in pow.iter_mut().zip(buf.iter()) {
                *p = z.norm_sqr();
            }
        } else {
            for (p, z) in pow.iter_mut().zip(buf.iter()) {
                let n2 = z.norm_sqr();
                *p = if n2 > 0.0 { n2.powf(self.pdf / 2.0) } else { 0.0 };
            }
        }
        let dot = |row: &[f64]| -> f64 {
            pow.iter().zip(row).map(|(&a, &b)| a * b).sum::<f64>() / g as f64
        };
        (
            self.plain_spike_pow + dot(&self.plain_row),
            self.weighted_spike_pow + dot(&self.weighted_row),
        )
    }
}

/// Two-sided power tail `c_n = |n|^{-delta}` on `2 <= |n| <= m`.
pub fn power_tail_coeffs(m: i64, delta: f64) -> Vec<(i64, f64)> {
    let mut out = Vec::new();
    for n in 2..=m {
        let c = (n as f64).powf(-delta);
        out.push((-n, c));
        out.push((n, c));
    }
    out.sort_by_key(|&(n, _)| n);
    out
}

/// The borderline tail `c_n = 1 / sqrt(|n| log(1 + |n|))`, whose square
/// sum diverges like `2 log log m` while every strictly heavier weighted
/// sum stays bounded.
#[derive(Debug, Clone, Copy)]
pub struct LogSeq {
    m: i64,
}

impl LogSeq {
    pub fn new(m: i64) -> Result<Self, ExtremizerError> {
        if m < 2 {
            return Err(ExtremizerError::Invalid(format!(
                "tail cutoff must be at least 2, got {m}"
            )));
        }
        Ok(LogSeq { m })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    fn amp(n: i64) -> f64 {
        let nf = n as f64;
        1.0 / (nf * (1.0 + nf).ln()).sqrt()
    }

    pub fn coeffs(&self) -> Vec<(i64, f64)> {
        let mut out = Vec::new();
        for n in 2..=self.m {
            out.push((-n, Self::amp(n)));
            out.push((n, Self::amp(n)));
        }
        out.sort_by_key(|&(n, _)| n);
        out
    }

    /// `sum_{2 <= |n| <= m} c_n^2`.
    pub fn l2_sq(&self) -> f64 {
        (2..=self.m).map(|n| 2.0 * Self::amp(n) * Self::amp(n)).sum()
    }

    /// `sum_{2 <= |n| <= m} (c_n |n|^gamma)^p`.
    pub fn weighted_lp_pow(&self, gamma: f64, p: f64) -> f64 {
        (2..=self.m)
            .map(|n| 2.0 * (Self::amp(n) * (n as f64).powf(gamma)).powf(p))
            .sum()
    }
}

pub fn log_seq_coeffs(m: i64) -> Vec<(i64, f64)> {
    LogSeq { m }.coeffs()
}

/// Tail amplitudes extremal for the Hoelder step that balances a spike of
/// scale `n_peak` against a tail of reach `m`: `c_n = kappa |n|^{-g3}`
/// with `g3 = p a1 / (p - 2)` and `kappa` chosen so that
/// `(sum |c_n|^p |n|^{p a1})^{1/p} = n_peak^{1/p' - a1}` (maximum instead
/// of sum for `p = inf`). Requires `p > 2`.
pub fn balanced_tail_coeffs(
    p: Lp,
    a1: f64,
    n_peak: i64,
    m: i64,
) -> Result<Vec<(i64, f64)>, ExtremizerError> {
    if !p.is_inf() && p.to_f64() <= 2.0 {
        return Err(ExtremizerError::Invalid(
            "the balanced tail requires an exponent above 2".into(),
        ));
    }
    if !(0.0..=16.0).contains(&a1) {
        return Err(ExtremizerError::Invalid(format!(
            "weight exponent out of range: {a1}"
        )));
    }
    if n_peak < 1 || m < 2 {
        return Err(ExtremizerError::Invalid(format!(
            "peak {n_peak} and tail cutoff {m} must be at least 1 and 2"
        )));
    }
    let nf = n_peak as f64;
    let (gamma3, kappa) = if p.is_inf() {
        (a1, nf.powf(1.0 - a1))
    } else {
        let pf = p.to_f64();
        let gamma3 = pf * a1 / (pf - 2.0);
        let sp_pow: f64 = (2..=m)
            .map(|n| 2.0 * (n as f64).powf(pf * (a1 - gamma3)))
            .sum();
        (gamma3, nf.powf(1.0 - 1.0 / pf - a1) / sp_pow.powf(1.0 / pf))
    };
    let mut out = Vec::new();
    for n in 2..=m {
        let c = kappa * (n as f64).powf(-gamma3);
        out.push((-n, c));
        out.push((n, c));
    }
    out.sort_by_key(|&(n, _)| n);
    Ok(out)
}
