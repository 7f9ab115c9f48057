//! Rearrangement-based characterization constants for weighted Fourier
//! inequalities with monotone radial power-log weights.
//!
//! Weights are `w(r) = r^power * log(e + r)^logpow`, optionally truncated
//! at a cutoff radius, and carry a monotonicity tag. On the measure line
//! `s = v_d r^d` (with `v_d` the volume of the unit ball) a non-increasing
//! `u` has decreasing rearrangement `u^{*,q}(s) = u(r(s))^q` and a
//! non-decreasing `v` has increasing rearrangement `v_*(s) = v(r(s))`, so
//! all inner integrals reduce to power-log integrals in `s`; those with no
//! log factor evaluate in closed form, the rest by adaptive quadrature.
//!
//! Three constants are exposed:
//!
//! * [`sup_product_constant`]: `sup_{s>0} (int_0^s u^{*,q})^{1/q}
//!   (int_0^{1/s} v_*^{-p'})^{1/p'}`, the two-sided characterization for
//!   `p <= q`.
//! * [`iterated_integral_constant`]: `(int_0^inf u^{*,q}(s)
//!   (int_0^s u^{*,q})^{r/p} (int_0^{1/s} v_*^{-p'})^{r/p'} ds)^{1/r}`
//!   with `1/r = 1/q - 1/p`, the characterization for `1 <= q < p` with
//!   `max(q, p') >= 2`; [`iterated_integral_cumulative`] exposes truncated
//!   outer integrals so divergence rates can be measured.
//! * [`necessary_sup_constant`]: `sup_s s^{d/2} (int_{|x|<=1/s} u^q)^{1/q}
//!   (int_{|x|>=s} v^{-p#})^{1/p#}` with `1/p# = 1/2 - 1/p`, the
//!   necessary condition available for `p > 2` and non-decreasing `v`.
//!
//! Divergence is decided symbolically by power counting at the endpoints
//! (with log-factor ties) before any numeric search runs, so `Infinite`
//! results are exact, not saturated grid values.

use serde::{Deserialize, Serialize};

use crate::norms::closed::surface_area;
use crate::norms::{integrate, integrate_auto, QuadOpts};
use crate::oracle::{ExponentPair, Lp};
use crate::real::Ext;

use super::SharpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    NonIncreasing,
    NonDecreasing,
}

/// A monotone radial power-log weight `r^power * log(e + r)^logpow`.
///
/// A cutoff truncates in the direction that preserves the tag: a
/// non-increasing weight becomes 0 beyond the cutoff radius, a
/// non-decreasing one becomes infinite there (so its negative powers
/// vanish).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub power: f64,
    pub logpow: f64,
    pub cutoff: Option<f64>,
    pub tag: Monotonicity,
}

/// Slack for exponent comparisons in the divergence power counting.
const EXP_TOL: f64 = 1e-9;

impl WeightSpec {
    pub fn new(
        power: f64,
        logpow: f64,
        cutoff: Option<f64>,
        tag: Monotonicity,
    ) -> Result<Self, SharpError> {
        let w = WeightSpec {
            power,
            logpow,
            cutoff,
            tag,
        };
        w.validate()?;
        Ok(w)
    }

    /// Pure power weight.
    pub fn power_weight(power: f64, tag: Monotonicity) -> Result<Self, SharpError> {
        Self::new(power, 0.0, None, tag)
    }

    /// The indicator of the ball of the given radius (as a non-increasing
    /// weight equal to 1 inside and 0 outside).
    pub fn truncated_indicator(radius: f64) -> Result<Self, SharpError> {
        Self::new(0.0, 0.0, Some(radius), Monotonicity::NonIncreasing)
    }

    /// Checks that the exponents are consistent with the monotonicity tag.
    /// `r^a log(e+r)^b` is non-increasing iff `a <= 0` and either `b <= 0`
    /// or `a + b <= 0` (the log slope is at most `b / (r log(e+r)) <=
    /// b / r`, so `a + b <= 0` dominates it); mirrored for non-decreasing.
    pub fn validate(&self) -> Result<(), SharpError> {
        if !self.power.is_finite() || !self.logpow.is_finite() {
            return Err(SharpError::Invalid(
                "weight exponents must be finite".into(),
            ));
        }
        if let Some(c) = self.cutoff {
            if !(c > 0.0) || !c.is_finite() {
                return Err(SharpError::Invalid(format!(
                    "cutoff radius must be positive and finite, got {c}"
                )));
            }
        }
        let (a, b) = (self.power, self.logpow);
        let ok = match self.tag {
            Monotonicity::NonIncreasing => a <= 0.0 && (b <= 0.0 || a + b <= 0.0),
            Monotonicity::NonDecreasing => a >= 0.0 && (b >= 0.0 || a + b >= 0.0),
        };
        if !ok {
            return Err(SharpError::Invalid(format!(
                "exponents (power {a}, logpow {b}) are inconsistent with the {:?} tag",
                self.tag
            )));
        }
        Ok(())
    }

    /// `r^power log(e+r)^logpow` before truncation; callers apply cutoff
    /// semantics themselves.
    fn eval_raw(&self, r: f64) -> f64 {
        r.powf(self.power) * (std::f64::consts::E + r).ln().powf(self.logpow)
    }

    /// Limit at `r -> 0+` (the log factor tends to 1).
    fn origin_limit(&self) -> Ext {
        if self.power > EXP_TOL {
            Ext::Finite(0.0)
        } else if self.power < -EXP_TOL {
            Ext::Infinite
        } else {
            Ext::Finite(1.0)
        }
    }
}

fn unit_ball_volume(d: u32) -> f64 {
    surface_area(d) / d as f64
}

fn require_tag(w: &WeightSpec, tag: Monotonicity, name: &str) -> Result<(), SharpError> {
    w.validate()?;
    if w.tag != tag {
        return Err(SharpError::Invalid(format!(
            "{name} must carry the {tag:?} tag, got {:?}",
            w.tag
        )));
    }
    Ok(())
}

fn require_dim(d: u32) -> Result<(), SharpError> {
    if d == 0 {
        return Err(SharpError::Invalid("dimension must be >= 1".into()));
    }
    Ok(())
}

/// A power of a monotone weight moved to the measure line: the density
/// `w(r(s))^x = (s/v_d)^{x a / d} log(e + (s/v_d)^{1/d})^{x b}`, truncated
/// to 0 beyond `cut = v_d r_c^d`.
struct SigmaSide {
    pow: f64,
    logp: f64,
    vd: f64,
    d: u32,
    cut: Option<f64>,
}

impl SigmaSide {
    fn new(w: &WeightSpec, x: f64, d: u32) -> Self {
        let vd = unit_ball_volume(d);
        SigmaSide {
            pow: x * w.power / d as f64,
            logp: x * w.logpow,
            vd,
            d,
            cut: w.cutoff.map(|r| vd * r.powi(d as i32)),
        }
    }

    fn density(&self, s: f64) -> f64 {
        if let Some(c) = self.cut {
            if s > c {
                return 0.0;
            }
        }
        let base = (s / self.vd).powf(self.pow);
        if self.logp == 0.0 {
            base
        } else {
            base * (std::f64::consts::E + (s / self.vd).powf(1.0 / self.d as f64))
                .ln()
                .powf(self.logp)
        }
    }

    /// Whether the cumulative integral from 0 diverges (origin power at or
    /// below -1; the log factor tends to 1 there and cannot help).
    fn head_divergent(&self) -> bool {
        self.pow <= -1.0 + EXP_TOL
    }

    /// `int_0^s` of the density; `Infinite` when the origin is
    /// non-integrable.
    fn cum(&self, s: f64) -> Ext {
        if self.head_divergent() {
            return Ext::Infinite;
        }
        let s_eff = match self.cut {
            Some(c) => s.min(c),
            None => s,
        };
        if s_eff <= 0.0 {
            return Ext::Finite(0.0);
        }
        if self.logp == 0.0 {
            return Ext::Finite(
                self.vd.powf(-self.pow) * s_eff.powf(self.pow + 1.0) / (self.pow + 1.0),
            );
        }
        let out = integrate(
            |t| self.density(t),
            0.0,
            s_eff,
            &QuadOpts::with_rel_tol(1e-9),
        );
        Ext::Finite(out.value)
    }
}

/// Endpoint behavior `value ~ C s^{pow} (log of the large side)^{logp}`.
#[derive(Clone, Copy)]
struct PowLog {
    pow: f64,
    logp: f64,
}

impl PowLog {
    const CONST: PowLog = PowLog { pow: 0.0, logp: 0.0 };

    fn add(self, other: PowLog) -> PowLog {
        PowLog {
            pow: self.pow + other.pow,
            logp: self.logp + other.logp,
        }
    }

    /// Whether `s^{pow} log^{logp}` blows up as `s -> inf`.
    fn grows_toward_inf(self) -> bool {
        self.pow > EXP_TOL || (self.pow.abs() <= EXP_TOL && self.logp > EXP_TOL)
    }

    /// Whether `s^{pow} (log large)^{logp}` blows up as `s -> 0+`.
    fn grows_toward_zero(self) -> bool {
        self.pow < -EXP_TOL || (self.pow.abs() <= EXP_TOL && self.logp > EXP_TOL)
    }
}

/// One factor of a sup-product: either a constant (the `q = inf` /
/// `p' = inf` essential-sup degenerations) or a root of a cumulative
/// integral on the measure line.
enum Factor {
    Const(Ext),
    /// `cum(arg(s))^{root}` where `arg` is `s` itself or `1/s`.
    Cum {
        side: SigmaSide,
        root: f64,
        reciprocal_arg: bool,
    },
}

impl Factor {
    fn value(&self, s: f64) -> Ext {
        match self {
            Factor::Const(v) => *v,
            Factor::Cum {
                side,
                root,
                reciprocal_arg,
            } => {
                let arg = if *reciprocal_arg { 1.0 / s } else { s };
                match side.cum(arg) {
                    Ext::Finite(v) => Ext::Finite(v.powf(*root)),
                    Ext::Infinite => Ext::Infinite,
                }
            }
        }
    }

    fn divergent_everywhere(&self) -> bool {
        match self {
            Factor::Const(v) => *v == Ext::Infinite,
            Factor::Cum { side, .. } => side.head_divergent(),
        }
    }

    /// Behavior as `s -> 0+`.
    fn at_zero(&self) -> PowLog {
        match self {
            Factor::Const(_) => PowLog::CONST,
            Factor::Cum {
                side,
                root,
                reciprocal_arg,
            } => {
                if *reciprocal_arg {
                    // Argument 1/s -> inf: saturated by a cutoff, otherwise
                    // ~ (1/s)^{pow+1} (log 1/s)^{logp}.
                    if side.cut.is_some() {
                        PowLog::CONST
                    } else {
                        PowLog {
                            pow: -(side.pow + 1.0) * root,
                            logp: side.logp * root,
                        }
                    }
                } else {
                    // Argument s -> 0: the log factor tends to 1.
                    PowLog {
                        pow: (side.pow + 1.0) * root,
                        logp: 0.0,
                    }
                }
            }
        }
    }

    /// Behavior as `s -> inf`.
    fn at_inf(&self) -> PowLog {
        match self {
            Factor::Const(_) => PowLog::CONST,
            Factor::Cum {
                side,
                root,
                reciprocal_arg,
            } => {
                if *reciprocal_arg {
                    // Argument 1/s -> 0: cutoff irrelevant, no log.
                    PowLog {
                        pow: -(side.pow + 1.0) * root,
                        logp: 0.0,
                    }
                } else if side.cut.is_some() {
                    PowLog::CONST
                } else {
                    PowLog {
                        pow: (side.pow + 1.0) * root,
                        logp: side.logp * root,
                    }
                }
            }
        }
    }
}

/// Supremum over a log-spaced grid on [1e-8, 1e8] with golden-section
/// refinement (in log coordinates) around the best grid cell.
fn log_grid_sup(f: impl Fn(f64) -> f64) -> f64 {
    let n = 321;
    let (lo, hi) = (1e-8f64, 1e8f64);
    let step = (hi / lo).powf(1.0 / (n - 1) as f64);
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0;
    let mut s = lo;
    for k in 0..n {
        let v = f(s);
        if v > best {
            best = v;
            best_k = k;
        }
        s *= step;
    }
    let mut a = (lo * step.powi(best_k as i32 - 1)).max(lo).ln();
    let mut b = (lo * step.powi(best_k as i32 + 1)).min(hi).ln();
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let m1 = b - phi * (b - a);
        let m2 = a + phi * (b - a);
        let (v1, v2) = (f(m1.exp()), f(m2.exp()));
        best = best.max(v1).max(v2);
        if v1 < v2 {
            a = m1;
        } else {
            b = m2;
        }
    }
    best
}

/// `sup_{s>0} (int_0^s u^{*,q})^{1/q} (int_0^{1/s} v_*^{-p'})^{1/p'}` for
/// non-increasing `u` and non-decreasing `v`; the two-sided
/// characterization constant for `p <= q`. Callers outside that exponent
/// range still get the formula's value.
pub fn sup_product_constant(
    u: &WeightSpec,
    v: &WeightSpec,
    e: ExponentPair,
    d: u32,
) -> Result<Ext, SharpError> {
    require_dim(d)?;
    require_tag(u, Monotonicity::NonIncreasing, "u")?;
    require_tag(v, Monotonicity::NonDecreasing, "v")?;

    let u_factor = match e.q {
        // Essential sup of u^* near the origin.
        Lp::Inf => Factor::Const(u.origin_limit()),
        Lp::Finite(q) => Factor::Cum {
            side: SigmaSide::new(u, q.to_f64(), d),
            root: 1.0 / q.to_f64(),
            reciprocal_arg: false,
        },
    };
    let v_factor = match e.p.conjugate() {
        // p = 1: essential sup of 1/v_* near the origin.
        Lp::Inf => Factor::Const(match v.origin_limit() {
            Ext::Finite(x) if x > 0.0 => Ext::Finite(1.0 / x),
            Ext::Finite(_) => Ext::Infinite,
            Ext::Infinite => Ext::Finite(0.0),
        }),
        Lp::Finite(pp) => Factor::Cum {
            side: SigmaSide::new(v, -pp.to_f64(), d),
            root: 1.0 / pp.to_f64(),
            reciprocal_arg: true,
        },
    };

    if u_factor.divergent_everywhere() || v_factor.divergent_everywhere() {
        return Ok(Ext::Infinite);
    }
    if u_factor.at_zero().add(v_factor.at_zero()).grows_toward_zero()
        || u_factor.at_inf().add(v_factor.at_inf()).grows_toward_inf()
    {
        return Ok(Ext::Infinite);
    }

    let best = log_grid_sup(|s| {
        match (u_factor.value(s), v_factor.value(s)) {
            (Ext::Finite(a), Ext::Finite(b)) => a * b,
            _ => f64::NEG_INFINITY,
        }
    });
    Ok(Ext::Finite(best))
}

/// Shared validation for the iterated-integral constant: `q < p` (so the
/// interpolation index `r` exists) with `max(q, p') >= 2`.
fn iterated_range(e: ExponentPair) -> Result<(f64, f64, f64), SharpError> {
    let r = e.r().ok_or_else(|| {
        SharpError::Invalid("the interpolation index r is undefined unless q < p".into())
    })?;
    let pp = e.p.conjugate();
    if e.q.lt_int(2) && pp.lt_int(2) {
        return Err(SharpError::Invalid(
            "iterated-integral range requires max(q, p') >= 2".into(),
        ));
    }
    let rf = r.to_f64();
    let r_over_p = match e.p {
        Lp::Inf => 0.0,
        Lp::Finite(p) => rf / p.to_f64(),
    };
    let r_over_pp = rf / pp.to_f64();
    Ok((rf, r_over_p, r_over_pp))
}

struct IteratedIntegrand {
    uside: SigmaSide,
    vside: SigmaSide,
    r_over_p: f64,
    r_over_pp: f64,
}

impl IteratedIntegrand {
    fn build(
        u: &WeightSpec,
        v: &WeightSpec,
        e: ExponentPair,
        d: u32,
    ) -> Result<(Self, f64), SharpError> {
        require_dim(d)?;
        require_tag(u, Monotonicity::NonIncreasing, "u")?;
        require_tag(v, Monotonicity::NonDecreasing, "v")?;
        let (rf, r_over_p, r_over_pp) = iterated_range(e)?;
        let q = match e.q {
            Lp::Finite(q) => q.to_f64(),
            Lp::Inf => unreachable!("q < p <= inf forces finite q"),
        };
        let pp = e.p.conjugate();
        Ok((
            IteratedIntegrand {
                uside: SigmaSide::new(u, q, d),
                vside: SigmaSide::new(v, -pp.to_f64(), d),
                r_over_p,
                r_over_pp,
            },
            rf,
        ))
    }

    /// Divergence of an inner integral that actually enters the product.
    fn inner_divergent(&self) -> bool {
        (self.r_over_p > 0.0 && self.uside.head_divergent()) || self.vside.head_divergent()
    }

    fn eval(&self, s: f64) -> f64 {
        let dens = self.uside.density(s);
        if dens == 0.0 {
            return 0.0;
        }
        let ucum = if self.r_over_p > 0.0 {
            match self.uside.cum(s) {
                Ext::Finite(x) => x.powf(self.r_over_p),
                Ext::Infinite => return f64::INFINITY,
            }
        } else {
            1.0
        };
        let vcum = match self.vside.cum(1.0 / s) {
            Ext::Finite(x) => x.powf(self.r_over_pp),
            Ext::Infinite => return f64::INFINITY,
        };
        dens * ucum * vcum
    }

    /// `I(s) ~ C s^{pow} log^{logp}` as `s -> 0`.
    fn at_zero(&self) -> PowLog {
        let mut c = PowLog {
            pow: self.uside.pow,
            logp: 0.0,
        };
        if self.r_over_p > 0.0 {
            c = c.add(PowLog {
                pow: (self.uside.pow + 1.0) * self.r_over_p,
                logp: 0.0,
            });
        }
        if self.vside.cut.is_none() {
            c = c.add(PowLog {
                pow: -(self.vside.pow + 1.0) * self.r_over_pp,
                logp: self.vside.logp * self.r_over_pp,
            });
        }
        c
    }

    /// `I(s) ~ C s^{pow} log^{logp}` as `s -> inf` (only queried when the
    /// u-side has no cutoff truncating the outer integral).
    fn at_inf(&self) -> PowLog {
        let mut c = PowLog {
            pow: self.uside.pow,
            logp: self.uside.logp,
        };
        if self.r_over_p > 0.0 {
            c = c.add(PowLog {
                pow: (self.uside.pow + 1.0) * self.r_over_p,
                logp: self.uside.logp * self.r_over_p,
            });
        }
        c.add(PowLog {
            pow: -(self.vside.pow + 1.0) * self.r_over_pp,
            logp: 0.0,
        })
    }
}

/// Whether `int_0 s^{pow} log^{logp}` converges at 0 (power above -1, or a
/// log tie with logp < -1).
fn integrable_at_zero(c: PowLog) -> bool {
    c.pow > -1.0 + EXP_TOL || (c.pow >= -1.0 - EXP_TOL && c.logp < -1.0 - EXP_TOL)
}

/// Whether `int^inf s^{pow} log^{logp}` converges at infinity.
fn integrable_at_inf(c: PowLog) -> bool {
    c.pow < -1.0 - EXP_TOL || (c.pow <= -1.0 + EXP_TOL && c.logp < -1.0 - EXP_TOL)
}

/// `(int_0^inf u^{*,q}(s) (int_0^s u^{*,q})^{r/p} (int_0^{1/s}
/// v_*^{-p'})^{r/p'} ds)^{1/r}`: the characterization constant for
/// `1 <= q < p` with `max(q, p') >= 2`; `Infinite` on power-counting
/// divergence at either end of the outer integral.
pub fn iterated_integral_constant(
    u: &WeightSpec,
    v: &WeightSpec,
    e: ExponentPair,
    d: u32,
) -> Result<Ext, SharpError> {
    let (integrand, rf) = IteratedIntegrand::build(u, v, e, d)?;
    if integrand.inner_divergent() {
        return Ok(Ext::Infinite);
    }
    if !integrable_at_zero(integrand.at_zero()) {
        return Ok(Ext::Infinite);
    }
    let outer_hi = integrand.uside.cut;
    if outer_hi.is_none() && !integrable_at_inf(integrand.at_inf()) {
        return Ok(Ext::Infinite);
    }

    let delta = 1e-12f64;
    let hi = outer_hi.unwrap_or(1e12);
    // Log-substituted core plus analytic endpoint corrections from the
    // exact endpoint powers (the measured prefactor times the closed-form
    // tail of a pure power).
    let core = integrate(
        |tau| {
            let s = tau.exp();
            integrand.eval(s) * s
        },
        delta.ln(),
        hi.ln(),
        &QuadOpts::with_rel_tol(1e-9),
    );
    let mut total = core.value;
    let e0 = integrand.at_zero().pow;
    total += integrand.eval(delta) * delta / (e0 + 1.0);
    if outer_hi.is_none() {
        let einf = integrand.at_inf().pow;
        total += integrand.eval(hi) * hi / (-(einf + 1.0));
    }
    Ok(Ext::Finite(total.powf(1.0 / rf)))
}

/// Truncated outer integral `int_lo^hi` of the same integrand, for
/// measuring divergence rates under cutoffs.
pub fn iterated_integral_cumulative(
    u: &WeightSpec,
    v: &WeightSpec,
    e: ExponentPair,
    d: u32,
    lo: f64,
    hi: f64,
) -> Result<f64, SharpError> {
    if !(0.0 < lo && lo < hi) || !hi.is_finite() {
        return Err(SharpError::Invalid(format!(
            "need 0 < lo < hi < inf, got ({lo}, {hi})"
        )));
    }
    let (integrand, _) = IteratedIntegrand::build(u, v, e, d)?;
    if integrand.inner_divergent() {
        return Err(SharpError::HypothesesViolated(
            "an inner integral diverges, so truncation in s cannot regularize".into(),
        ));
    }
    let out = integrate(
        |tau| {
            let s = tau.exp();
            integrand.eval(s) * s
        },
        lo.ln(),
        hi.ln(),
        &QuadOpts::with_rel_tol(1e-10),
    );
    Ok(out.value)
}

/// `sup_s s^{d/2} (int_{|x|<=1/s} u^q)^{1/q} (int_{|x|>=s} v^{-p#})^{1/p#}`
/// for `p > 2` and non-decreasing `v`, with `1/p# = 1/2 - 1/p`.
pub fn necessary_sup_constant(
    u: &WeightSpec,
    v: &WeightSpec,
    e: ExponentPair,
    d: u32,
) -> Result<Ext, SharpError> {
    require_dim(d)?;
    u.validate()?;
    require_tag(v, Monotonicity::NonDecreasing, "v")?;
    let ps = e
        .p_sharp()
        .ok_or_else(|| SharpError::Invalid("the necessary sup requires p > 2".into()))?;
    let psf = ps.to_f64();
    let df = d as f64;
    let omega = surface_area(d);

    // A non-decreasing u with a cutoff is infinite beyond it, so every
    // ball integral with radius past the cutoff diverges.
    if u.tag == Monotonicity::NonDecreasing && u.cutoff.is_some() {
        return Ok(Ext::Infinite);
    }

    // Ball factor: (omega int_0^{1/s} u^q r^{d-1} dr)^{1/q}, essential sup
    // for q = inf.
    let (au, bu) = (u.power, u.logpow);
    let ball_divergent = match e.q {
        Lp::Inf => u.tag == Monotonicity::NonIncreasing && au < -EXP_TOL,
        Lp::Finite(q) => q.to_f64() * au <= -df + EXP_TOL,
    };
    if ball_divergent {
        return Ok(Ext::Infinite);
    }

    // Tail factor: (omega int_s^{cut or inf} v^{-p#} r^{d-1} dr)^{1/p#}.
    let (av, bv) = (v.power, v.logpow);
    if v.cutoff.is_none() {
        let tail_ok = psf * av > df + EXP_TOL
            || ((psf * av - df).abs() <= EXP_TOL && psf * bv > 1.0 + EXP_TOL);
        if !tail_ok {
            return Ok(Ext::Infinite);
        }
    }

    // Endpoint power counting for the full product s^{d/2} ball tail.
    let ball_at_inf = match e.q {
        // Radius 1/s -> 0; logs flatten to 1.
        Lp::Inf => match u.tag {
            Monotonicity::NonIncreasing => PowLog::CONST,
            Monotonicity::NonDecreasing => PowLog { pow: -au, logp: 0.0 },
        },
        Lp::Finite(q) => {
            let qf = q.to_f64();
            PowLog {
                pow: -(au + df / qf),
                logp: 0.0,
            }
        }
    };
    let ball_at_zero = match e.q {
        Lp::Inf => match u.tag {
            Monotonicity::NonIncreasing => PowLog::CONST,
            Monotonicity::NonDecreasing => PowLog { pow: -au, logp: bu },
        },
        Lp::Finite(q) => {
            let qf = q.to_f64();
            if u.cutoff.is_some() {
                PowLog::CONST
            } else {
                let growth = qf * au + df;
                if growth > EXP_TOL {
                    PowLog {
                        pow: -(au + df / qf),
                        logp: bu,
                    }
                } else if growth < -EXP_TOL {
                    PowLog::CONST
                } else {
                    PowLog {
                        pow: 0.0,
                        logp: bu + 1.0 / qf,
                    }
                }
            }
        }
    };
    let tail_at_inf = if v.cutoff.is_some() {
        // The factor is identically 0 for s past the cutoff; no growth.
        None
    } else if (psf * av - df).abs() <= EXP_TOL {
        Some(PowLog {
            pow: 0.0,
            logp: (1.0 - psf * bv) / psf,
        })
    } else {
        Some(PowLog {
            pow: df / psf - av,
            logp: -bv,
        })
    };
    let tail_at_zero = {
        let near_zero = -psf * av + df;
        if near_zero < -EXP_TOL {
            PowLog {
                pow: df / psf - av,
                logp: 0.0,
            }
        } else if near_zero > EXP_TOL {
            PowLog::CONST
        } else {
            PowLog {
                pow: 0.0,
                logp: (1.0 - psf * bv) / psf,
            }
        }
    };
    let half = PowLog {
        pow: df / 2.0,
        logp: 0.0,
    };
    if let Some(t) = tail_at_inf {
        if half.add(ball_at_inf).add(t).grows_toward_inf() {
            return Ok(Ext::Infinite);
        }
    }
    if half.add(ball_at_zero).add(tail_at_zero).grows_toward_zero() {
        return Ok(Ext::Infinite);
    }

    let opts = QuadOpts::with_rel_tol(1e-9);
    let ball = |s: f64| -> f64 {
        let radius = 1.0 / s;
        match e.q {
            Lp::Inf => match u.tag {
                Monotonicity::NonIncreasing => {
                    if au.abs() <= EXP_TOL {
                        1.0
                    } else {
                        0.0
                    }
                }
                Monotonicity::NonDecreasing => u.eval_raw(radius),
            },
            Lp::Finite(q) => {
                let qf = q.to_f64();
                let r_eff = match u.cutoff {
                    Some(c) => radius.min(c),
                    None => radius,
                };
                let integral = if bu == 0.0 {
                    omega * r_eff.powf(qf * au + df) / (qf * au + df)
                } else {
                    omega
                        * integrate(
                            |r| u.eval_raw(r).powf(qf) * r.powf(df - 1.0),
                            0.0,
                            r_eff,
                            &opts,
                        )
                        .value
                };
                integral.powf(1.0 / qf)
            }
        }
    };
    let tail = |s: f64| -> f64 {
        let integrand = |r: f64| v.eval_raw(r).powf(-psf) * r.powf(df - 1.0);
        let integral = match v.cutoff {
            Some(c) => {
                if s >= c {
                    0.0
                } else if bv == 0.0 {
                    let x = -psf * av + df;
                    if x.abs() <= EXP_TOL {
                        omega * (c / s).ln()
                    } else {
                        omega * (c.powf(x) - s.powf(x)) / x
                    }
                } else {
                    omega * integrate(integrand, s, c, &opts).value
                }
            }
            None => {
                if bv == 0.0 {
                    omega * s.powf(-psf * av + df) / (psf * av - df)
                } else {
                    omega * integrate_auto(integrand, s, &opts).value
                }
            }
        };
        integral.powf(1.0 / psf)
    };

    let best = log_grid_sup(|s| {
        let t = tail(s);
        if t == 0.0 {
            return 0.0;
        }
        s.powf(df / 2.0) * ball(s) * t
    });
    Ok(Ext::Finite(best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(p: Lp, q: Lp) -> ExponentPair {
        ExponentPair::new(p, q)
    }

    fn flat(tag: Monotonicity) -> WeightSpec {
        WeightSpec::new(0.0, 0.0, None, tag).unwrap()
    }

    #[test]
    fn tag_validation_matches_the_monotonicity() {
        assert!(WeightSpec::new(-0.5, 0.0, None, Monotonicity::NonIncreasing).is_ok());
        assert!(WeightSpec::new(-0.5, 0.3, None, Monotonicity::NonIncreasing).is_ok());
        assert!(WeightSpec::new(-0.1, 1.0, None, Monotonicity::NonIncreasing).is_err());
        assert!(WeightSpec::new(0.1, 0.0, None, Monotonicity::NonIncreasing).is_err());
        assert!(WeightSpec::new(0.5, -0.3, None, Monotonicity::NonDecreasing).is_ok());
        assert!(WeightSpec::new(-0.1, 0.0, None, Monotonicity::NonDecreasing).is_err());
        assert!(WeightSpec::new(0.0, 0.0, Some(-1.0), Monotonicity::NonIncreasing).is_err());
    }

    #[test]
    fn truncated_indicator_against_flat_v_gives_one() {
        // U(s) = min(s, s_c), V(y) = y: the product is 1 on s <= s_c and
        // decays beyond, so the sup is exactly 1.
        let u = WeightSpec::truncated_indicator(1.0).unwrap();
        let v = flat(Monotonicity::NonDecreasing);
        let out = sup_product_constant(&u, &v, ep(Lp::int(2), Lp::int(2)), 1).unwrap();
        match out {
            Ext::Finite(c) => assert!((c - 1.0).abs() < 1e-9, "got {c}"),
            Ext::Infinite => panic!("expected a finite sup"),
        }
    }

    #[test]
    fn cancelling_exponents_give_one_for_all_s() {
        // u = v = 1: U(s) = s and V(y) = y, so the product is s^{1/2} s^{-1/2}.
        let u = flat(Monotonicity::NonIncreasing);
        let v = flat(Monotonicity::NonDecreasing);
        let out = sup_product_constant(&u, &v, ep(Lp::int(2), Lp::int(2)), 1).unwrap();
        match out {
            Ext::Finite(c) => assert!((c - 1.0).abs() < 1e-12, "got {c}"),
            Ext::Infinite => panic!("expected a finite sup"),
        }
    }

    #[test]
    fn divergent_inner_integrals_report_infinite() {
        // v^{-p'} non-integrable at the origin.
        let u = WeightSpec::truncated_indicator(1.0).unwrap();
        let v = WeightSpec::power_weight(0.6, Monotonicity::NonDecreasing).unwrap();
        let out = sup_product_constant(&u, &v, ep(Lp::int(2), Lp::int(2)), 1).unwrap();
        assert_eq!(out, Ext::Infinite);

        // u^q non-integrable at the origin.
        let u = WeightSpec::power_weight(-1.0, Monotonicity::NonIncreasing).unwrap();
        let v = flat(Monotonicity::NonDecreasing);
        let out = sup_product_constant(&u, &v, ep(Lp::int(2), Lp::int(2)), 1).unwrap();
        assert_eq!(out, Ext::Infinite);
    }

    #[test]
    fn endpoint_growth_reports_infinite() {
        // Untruncated u with a v too weak at infinity: the product grows
        // like s^{0.2} as s -> inf.
        let u = flat(Monotonicity::NonIncreasing);
        let v = WeightSpec::power_weight(0.2, Monotonicity::NonDecreasing).unwrap();
        let out = sup_product_constant(&u, &v, ep(Lp::int(2), Lp::int(2)), 1).unwrap();
        assert_eq!(out, Ext::Infinite);
    }

    #[test]
    fn sup_corners_handle_infinite_exponents() {
        // q = inf with u flat: the u-factor is the origin sup, 1.
        let u = flat(Monotonicity::NonIncreasing);
        let v = WeightSpec::new(0.8, 0.0, Some(1.0), Monotonicity::NonDecreasing).unwrap();
        let out = sup_product_constant(&u, &v, ep(Lp::int(2), Lp::Inf), 1).unwrap();
        // V saturates at V(s_c) = int_0^{2} (s/2)^{-1.6}: divergent at 0?
        // pow = -1.6 <= -1, so the v-side is divergent everywhere.
        assert_eq!(out, Ext::Infinite);

        // p = 1 makes the v-factor the origin sup of 1/v.
        let v = WeightSpec::power_weight(0.5, Monotonicity::NonDecreasing).unwrap();
        let out = sup_product_constant(&u, &v, ep(Lp::int(1), Lp::int(2)), 1).unwrap();
        assert_eq!(out, Ext::Infinite);
    }

    #[test]
    fn iterated_constant_matches_the_hand_computed_truncated_case() {
        // d=1, (p,q)=(4,2): r = 4, r/p = 1, r/p' = 3. With u the indicator
        // of r <= 1/2 and v infinite past 1/2, both inner integrals are
        // min(., 1) and I(s) = s 1_{s<=1}, so the outer integral is 1/2.
        let u = WeightSpec::truncated_indicator(0.5).unwrap();
        let v = WeightSpec::new(0.0, 0.0, Some(0.5), Monotonicity::NonDecreasing).unwrap();
        let out = iterated_integral_constant(&u, &v, ep(Lp::int(4), Lp::int(2)), 1).unwrap();
        match out {
            Ext::Finite(c) => {
                let expect = 0.5f64.powf(0.25);
                assert!((c - expect).abs() < 1e-6 * expect, "got {c}, want {expect}");
            }
            Ext::Infinite => panic!("expected a finite constant"),
        }
    }

    #[test]
    fn iterated_constant_detects_power_divergence_at_infinity() {
        // u flat, v = r^{1/2}, (p,q) = (4,2): the integrand behaves like
        // s^0 at infinity, a clean power divergence of the outer integral.
        let u = flat(Monotonicity::NonIncreasing);
        let v = WeightSpec::power_weight(0.5, Monotonicity::NonDecreasing).unwrap();
        let out = iterated_integral_constant(&u, &v, ep(Lp::int(4), Lp::int(2)), 1).unwrap();
        assert_eq!(out, Ext::Infinite);
    }

    #[test]
    fn truncating_v_restores_a_finite_iterated_constant() {
        // Same u but v infinite past 1/2: I(s) = s min(1/s,1)^3 integrates
        // to 1/2 + 1 = 3/2 and the constant is (3/2)^{1/4}.
        let u = flat(Monotonicity::NonIncreasing);
        let v = WeightSpec::new(0.0, 0.0, Some(0.5), Monotonicity::NonDecreasing).unwrap();
        let out = iterated_integral_constant(&u, &v, ep(Lp::int(4), Lp::int(2)), 1).unwrap();
        match out {
            Ext::Finite(c) => {
                let expect = 1.5f64.powf(0.25);
                assert!((c - expect).abs() < 1e-5 * expect, "got {c}, want {expect}");
            }
            Ext::Infinite => panic!("expected a finite constant"),
        }
    }

    #[test]
    fn iterated_constant_rejects_out_of_range_exponents() {
        let u = flat(Monotonicity::NonIncreasing);
        let v = flat(Monotonicity::NonDecreasing);
        // q >= p: r undefined.
        assert!(iterated_integral_constant(&u, &v, ep(Lp::int(2), Lp::int(4)), 1).is_err());
        // max(q, p') < 2: q = 4/3 < 2 and p' = 4/3 < 2.
        let e = ep(Lp::int(4), Lp::Finite(crate::Real::ratio(4, 3)));
        assert!(iterated_integral_constant(&u, &v, e, 1).is_err());
    }

    #[test]
    fn log_divergent_instance_grows_logarithmically() {
        // u = r^{-1/4}, v = r^{3/4}, (p,q) = (inf,2), d=1: the integrand is
        // exactly 64/s, so cumulative integrals grow like 64 log(hi/lo).
        let u = WeightSpec::power_weight(-0.25, Monotonicity::NonIncreasing).unwrap();
        let v = WeightSpec::power_weight(0.75, Monotonicity::NonDecreasing).unwrap();
        let e = ep(Lp::Inf, Lp::int(2));
        let out = iterated_integral_constant(&u, &v, e, 1).unwrap();
        assert_eq!(out, Ext::Infinite);

        let cum = iterated_integral_cumulative(&u, &v, e, 1, 1.0, 1e3).unwrap();
        let expect = 64.0 * 1e3f64.ln();
        assert!((cum - expect).abs() < 1e-6 * expect, "got {cum}, want {expect}");
    }

    #[test]
    fn necessary_sup_matches_the_corner_value() {
        // u indicator of r <= 1, q = 2, v = r^{1/2}, p = 4 (p# = 4), d = 1.
        // With surface measure 2 on the line, the product is
        // 2^{3/4} min(s, 1/s)^{1/4}, so the sup sits at s = 1.
        let u = WeightSpec::truncated_indicator(1.0).unwrap();
        let v = WeightSpec::power_weight(0.5, Monotonicity::NonDecreasing).unwrap();
        let out = necessary_sup_constant(&u, &v, ep(Lp::int(4), Lp::int(2)), 1).unwrap();
        match out {
            Ext::Finite(c) => {
                let expect = 2f64.powf(0.75);
                assert!((c - expect).abs() < 1e-6 * expect, "got {c}, want {expect}");
            }
            Ext::Infinite => panic!("expected a finite sup"),
        }
    }

    #[test]
    fn necessary_sup_diverges_without_tail_decay() {
        let u = WeightSpec::truncated_indicator(1.0).unwrap();
        let v = flat(Monotonicity::NonDecreasing);
        let out = necessary_sup_constant(&u, &v, ep(Lp::int(4), Lp::int(2)), 1).unwrap();
        assert_eq!(out, Ext::Infinite);
    }

    #[test]
    fn necessary_sup_requires_p_above_two() {
        let u = WeightSpec::truncated_indicator(1.0).unwrap();
        let v = WeightSpec::power_weight(0.5, Monotonicity::NonDecreasing).unwrap();
        assert!(necessary_sup_constant(&u, &v, ep(Lp::int(2), Lp::int(2)), 1).is_err());
    }
}
