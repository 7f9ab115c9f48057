//! The modulated-bump family `f(x) = E(x/t) T(x/t)` where `E` is the
//! spread window (the transform of the compact bump) and `T` a
//! trigonometric polynomial.
//!
//! Its transform is `t sum_n c_n phi(t xi - n)` with `phi` the compact
//! bump, a sum of disjointly supported translates, so transform-side
//! weighted norms reduce to per-mode integrals. Both sides track
//! closed-form predictions, exact for a single mode with flat weights and
//! within fixed bracket constants in general: the weight is sampled at a
//! representative argument of each piece and the window contributes its
//! own `L^p` mass.

use std::collections::HashMap;
use std::sync::Mutex;

use once_cell::sync::Lazy;

use super::periodized::{envelope_product_norm, SPREAD_WINDOW_REACH};
use super::{BumpProfile, ExtremizerError};
use crate::norms::bump::{compact_profile, dual_profile, COMPACT_SUPPORT};
use crate::norms::{
    fourier_transform, integrate, trigpoly_lq_norm, weighted_lq_norm, ClosedFormFn, QuadOpts,
    TrigPoly,
};
use crate::oracle::Lp;
use crate::real::Ext;
use crate::weights::BrokenWeight;

/// `|| compact window ||_{L^p}`; the sup is attained at the origin.
pub(crate) fn compact_window_mass(p: Lp) -> f64 {
    if p.is_inf() {
        return compact_profile(0.0);
    }
    cached_mass(0x43, p.to_f64(), |pf| {
        let opts = QuadOpts::with_rel_tol(1e-11);
        2.0 * integrate(|u| compact_profile(u).powf(pf), 0.0, COMPACT_SUPPORT, &opts).value
    })
}

/// `|| spread window ||_{L^q}`; the window is the transform of a
/// nonnegative even bump, so its sup is also attained at the origin.
pub(crate) fn spread_window_mass(q: Lp) -> f64 {
    if q.is_inf() {
        return dual_profile(0.0);
    }
    cached_mass(0x53, q.to_f64(), |qf| {
        // Unit-by-unit panels keep the oscillation of the window from
        // stalling a single global adaptive pass.
        let opts = QuadOpts {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            ..QuadOpts::default()
        };
        let total: f64 = (0..SPREAD_WINDOW_REACH)
            .map(|k| {
                integrate(
                    |y| dual_profile(y).abs().powf(qf),
                    k as f64,
                    (k + 1) as f64,
                    &opts,
                )
                .value
            })
            .sum();
        2.0 * total
    })
}

fn cached_mass(tag: u64, ex: f64, compute: impl Fn(f64) -> f64) -> f64 {
    static CACHE: Lazy<Mutex<HashMap<(u64, u64), f64>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    let key = (tag, ex.to_bits());
    if let Some(&v) = CACHE.lock().unwrap().get(&key) {
        return v;
    }
    let v = compute(ex).powf(1.0 / ex);
    CACHE.lock().unwrap().insert(key, v);
    v
}

/// A spread window dilated by `t` carrying the modes of `coeffs`.
#[derive(Debug, Clone)]
pub struct ModulatedBumpFamily {
    t: f64,
    coeffs: TrigPoly,
    profile: BumpProfile,
}

/// Builds the family member with dilation `t` and mode coefficients
/// `coeffs`; only `d = 1` has evaluation paths. An empty `coeffs` is the
/// zero function, accepted so degenerate inputs surface as zero norms
/// rather than construction errors.
pub fn build_modulated(
    d: u32,
    t: f64,
    coeffs: TrigPoly,
) -> Result<ModulatedBumpFamily, ExtremizerError> {
    if d != 1 {
        return Err(ExtremizerError::Invalid(format!(
            "modulated bumps evaluate in dimension 1 only, got d = {d}"
        )));
    }
    if coeffs.d() != 1 {
        return Err(ExtremizerError::Invalid(format!(
            "coefficient polynomial must be univariate, got d = {}",
            coeffs.d()
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(ExtremizerError::Invalid(format!(
            "dilation must be positive and finite, got {t}"
        )));
    }
    Ok(ModulatedBumpFamily {
        t,
        coeffs,
        profile: BumpProfile::SpreadWindow,
    })
}

fn check_weight(w: &BrokenWeight, side: &str) -> Result<(), ExtremizerError> {
    if w.a1.to_f64() < 0.0 || w.a2.to_f64() < 0.0 {
        return Err(ExtremizerError::Invalid(format!(
            "{side} weight exponents must be nonnegative, got ({}, {})",
            w.a1.to_f64(),
            w.a2.to_f64()
        )));
    }
    Ok(())
}

impl ModulatedBumpFamily {
    pub fn d(&self) -> u32 {
        1
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn coeffs(&self) -> &TrigPoly {
        &self.coeffs
    }

    pub fn profile(&self) -> BumpProfile {
        self.profile
    }

    pub fn f(&self) -> ClosedFormFn {
        ClosedFormFn::modulated_bump(self.t, self.coeffs.clone())
            .expect("inputs validated at construction")
    }

    pub fn f_hat(&self) -> ClosedFormFn {
        fourier_transform(&self.f(), 1).expect("modulated bumps have a closed transform")
    }

    /// `|| f w_a ||_{L^q}` evaluated through the periodized envelope path.
    pub fn x_norm(&self, a: &BrokenWeight, q: Lp) -> Result<f64, ExtremizerError> {
        check_weight(a, "space")?;
        let (t, a) = (self.t, *a);
        let h = move |u: f64| dual_profile(u) * a.eval_pos((t * u).abs());
        envelope_product_norm(&self.coeffs, t, &h, SPREAD_WINDOW_REACH, q, 16)
            .map_err(Into::into)
    }

    /// Closed-form proxy for [`Self::x_norm`]: dilation power, weight at
    /// the window scale, mode norm, window mass.
    pub fn x_predicted(&self, a: &BrokenWeight, q: Lp) -> Result<f64, ExtremizerError> {
        check_weight(a, "space")?;
        if self.coeffs.is_empty() {
            return Ok(0.0);
        }
        let scale = self.t.powf(q.inv().to_f64());
        Ok(scale * a.eval_pos(self.t) * trigpoly_lq_norm(&self.coeffs, q)? * spread_window_mass(q))
    }

    /// `|| fhat w_b ||_{L^p}` via the exact per-mode integrals of the
    /// disjointly supported transform pieces.
    pub fn xi_norm(&self, b: &BrokenWeight, p: Lp) -> Result<f64, ExtremizerError> {
        check_weight(b, "transform")?;
        match weighted_lq_norm(&self.f_hat(), b, p, 1)? {
            Ext::Finite(v) => Ok(v),
            Ext::Infinite => Err(ExtremizerError::Invalid(
                "transform-side norm is infinite for this weight".into(),
            )),
        }
    }

    /// Closed-form proxy for [`Self::xi_norm`]: each mode `n` contributes
    /// its coefficient times the weight at `(1 + |n|)/t`, and the window
    /// contributes its own mass.
    pub fn xi_predicted(&self, b: &BrokenWeight, p: Lp) -> Result<f64, ExtremizerError> {
        check_weight(b, "transform")?;
        if self.coeffs.is_empty() {
            return Ok(0.0);
        }
        let mode_part = if p.is_inf() {
            self.coeffs
                .terms()
                .map(|(n, c)| c.norm() * b.eval_pos((1.0 + n[0].abs() as f64) / self.t))
                .fold(0.0, f64::max)
        } else {
            let pf = p.to_f64();
            self.coeffs
                .terms()
                .map(|(n, c)| {
                    let w = b.eval_pos((1.0 + n[0].abs() as f64) / self.t);
                    (c.norm() * w).powf(pf)
                })
                .sum::<f64>()
                .powf(1.0 / pf)
        };
        let scale = self.t.powf(1.0 - p.inv().to_f64());
        Ok(scale * mode_part * compact_window_mass(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn flat() -> BrokenWeight {
        BrokenWeight::new(0, 0)
    }

    fn single_mode() -> TrigPoly {
        let mut t = TrigPoly::new(1, 0).unwrap();
        t.set(&[0], Complex64::new(1.0, 0.0)).unwrap();
        t
    }

    fn random_poly(rng: &mut ChaCha8Rng, degree: i64) -> TrigPoly {
        let mut t = TrigPoly::new(1, degree).unwrap();
        for n in -degree..=degree {
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            t.set(&[n], Complex64::new(re, im)).unwrap();
        }
        t.set(&[0], Complex64::new(1.0, 0.0)).unwrap();
        t
    }

    #[test]
    fn single_mode_transform_norm_is_the_window_mass() {
        let fam = build_modulated(1, 1.0, single_mode()).unwrap();
        for p in [Lp::int(1), Lp::int(2), Lp::int(4), Lp::Inf] {
            let got = fam.xi_norm(&flat(), p).unwrap();
            let want = compact_window_mass(p);
            assert!(
                (got - want).abs() <= 1e-6 * want,
                "p = {p:?}: got {got}, want {want}"
            );
            let predicted = fam.xi_predicted(&flat(), p).unwrap();
            assert!((predicted - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn two_mode_transform_bracket() {
        let mut c = TrigPoly::new(1, 1).unwrap();
        c.set(&[0], Complex64::new(1.0, 0.0)).unwrap();
        c.set(&[1], Complex64::new(1.0, 0.0)).unwrap();
        let fam = build_modulated(1, 2.0, c).unwrap();
        let b = BrokenWeight::new(1, 1);
        let ratio =
            fam.xi_norm(&b, Lp::int(2)).unwrap() / fam.xi_predicted(&b, Lp::int(2)).unwrap();
        assert!(
            (0.25..=4.0).contains(&ratio),
            "bracket violated: ratio {ratio}"
        );
    }

    #[test]
    fn parseval_norm_carries_the_window_factor() {
        for &t in &[0.5, 4.0] {
            let fam = build_modulated(1, t, single_mode()).unwrap();
            let got = fam.x_norm(&flat(), Lp::int(2)).unwrap();
            let want = fam.x_predicted(&flat(), Lp::int(2)).unwrap();
            assert!(
                (got - want).abs() <= 5e-4 * want,
                "t = {t}: got {got}, want {want}"
            );
            assert!((want - t.sqrt() * spread_window_mass(Lp::int(2))).abs() <= 1e-12 * want);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fam = build_modulated(1, 1.5, random_poly(&mut rng, 4)).unwrap();
        let ratio = fam.x_norm(&flat(), Lp::int(2)).unwrap()
            / fam.x_predicted(&flat(), Lp::int(2)).unwrap();
        assert!((0.25..=4.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn bracket_sweep_is_stable() {
        let weights = [
            BrokenWeight::new(crate::real::Real::ratio(1, 2), 1),
            BrokenWeight::new(1, 1),
            BrokenWeight::new(2, crate::real::Real::ratio(1, 2)),
        ];
        let exponents = [Lp::int(1), Lp::int(2), Lp::int(4), Lp::Inf];
        let ts = [0.125, 1.0, 8.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0xB0CA);
        let polys: Vec<TrigPoly> = (0..2).map(|_| random_poly(&mut rng, 7)).collect();
        for w in &weights {
            for &e in &exponents {
                let mut x_ratios = Vec::new();
                let mut xi_ratios = Vec::new();
                for &t in &ts {
                    for c in &polys {
                        let fam = build_modulated(1, t, c.clone()).unwrap();
                        x_ratios.push(fam.x_norm(w, e).unwrap() / fam.x_predicted(w, e).unwrap());
                        xi_ratios
                            .push(fam.xi_norm(w, e).unwrap() / fam.xi_predicted(w, e).unwrap());
                    }
                }
                for ratios in [&x_ratios, &xi_ratios] {
                    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                    let hi = ratios.iter().cloned().fold(0.0, f64::max);
                    assert!(
                        lo > 0.0 && hi.is_finite() && hi / lo <= 10.0,
                        "unstable bracket for w = {w:?}, e = {e:?}: spread {}",
                        hi / lo
                    );
                }
            }
        }
    }

    #[test]
    fn empty_coefficients_give_zero_norms() {
        let fam = build_modulated(1, 1.0, TrigPoly::new(1, 3).unwrap()).unwrap();
        assert_eq!(fam.x_norm(&flat(), Lp::int(2)).unwrap(), 0.0);
        assert_eq!(fam.x_predicted(&flat(), Lp::int(2)).unwrap(), 0.0);
        assert_eq!(fam.xi_norm(&flat(), Lp::int(2)).unwrap(), 0.0);
        assert_eq!(fam.xi_predicted(&flat(), Lp::int(2)).unwrap(), 0.0);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(build_modulated(2, 1.0, single_mode()).is_err());
        assert!(build_modulated(1, 0.0, single_mode()).is_err());
        assert!(build_modulated(1, f64::NAN, single_mode()).is_err());
        let fam = build_modulated(1, 1.0, single_mode()).unwrap();
        let neg = BrokenWeight::new(crate::real::Real::int(-1), 1);
        assert!(fam.x_norm(&neg, Lp::int(2)).is_err());
        assert!(fam.xi_norm(&neg, Lp::int(2)).is_err());
    }
}
