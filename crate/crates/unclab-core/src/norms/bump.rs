//! The smooth compactly supported profile shared by the test-function
//! families, together with its Fourier transform.
//!
//! [`compact_profile`] is `exp(-1/(1-(4u)^2))` on `|u| < 1/4`, extended by
//! zero: smooth, nonnegative, bounded by `e^{-1}`.  Its transform
//! [`dual_profile`] is real, even, and decays faster than any power
//! (empirically like `exp(-2.2 sqrt(|y|))` modulo oscillation); it is
//! tabulated once by a dense discrete Fourier transform and interpolated
//! cubically.
//!
//! The support radius 1/4 is deliberate.  The constructions that multiply a
//! lattice sum against this profile need the transform side to be
//! nonvanishing on the shifted cell `[1, 2]`, and the transform of the
//! twice-as-wide profile `exp(-1/(1-(2u)^2))` has its first zero near 1.56,
//! inside that cell.  Halving the support dilates the zero set by two (first
//! zero near 3.1), which clears `[1, 2]` with margin about 4.5e-2.  The
//! margin is pinned by an integration test.

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::FftPlanner;

/// Support radius of [`compact_profile`].
pub const COMPACT_SUPPORT: f64 = 0.25;

/// Spacing of the [`dual_profile`] table; equals `1 / WINDOW`.
const STEP: f64 = 1.0 / WINDOW as f64;
/// Width of the sampling window for the tabulation transform.  The profile
/// is supported well inside it, so the periodization is exact.
const WINDOW: usize = 32;
/// Samples per unit length; the Nyquist frequency `RATE / 2` bounds the
/// table range, and the aliasing error is the transform's value there,
/// far below double precision.
const RATE: usize = 4096;

/// `exp(-1/(1-(4u)^2))` for `|u| < 1/4`, zero elsewhere.
pub fn compact_profile(u: f64) -> f64 {
    let s = 4.0 * u;
    let den = 1.0 - s * s;
    if den <= 0.0 {
        0.0
    } else {
        (-1.0 / den).exp()
    }
}

/// Transform values on the uniform grid `k * STEP`, `k = 0 ..= L/2`.
static TABLE: Lazy<Vec<f64>> = Lazy::new(|| {
    let len = WINDOW * RATE;
    let mut buf: Vec<Complex64> = (0..len)
        .map(|j| {
            let x = -(WINDOW as f64) / 2.0 + j as f64 / RATE as f64;
            Complex64::new(compact_profile(x), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    // The window offset -W/2 contributes the phase e^{pi i k} at frequency
    // k / W; the transform itself is real by evenness.
    (0..=len / 2)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * buf[k].re / RATE as f64
        })
        .collect()
});

/// Radius beyond which [`dual_profile`] evaluates to exactly zero (the end
/// of the table; the true values there are below 1e-30).
pub fn dual_profile_reach() -> f64 {
    (TABLE.len() - 2) as f64 * STEP
}

/// Fourier transform of [`compact_profile`]: real, even, Schwartz-class.
///
/// Catmull-Rom interpolation of the precomputed table, absolute accuracy
/// around 1e-8; identically zero beyond the tabulated range, where the true
/// values are below 1e-30.
pub fn dual_profile(y: f64) -> f64 {
    let table = &*TABLE;
    let a = y.abs() / STEP;
    if !a.is_finite() || a >= (table.len() - 2) as f64 {
        return 0.0;
    }
    let i = a.floor() as usize;
    let f = a - i as f64;
    // Mirror across zero: the function is even.
    let p0 = if i == 0 { table[1] } else { table[i - 1] };
    let (p1, p2, p3) = (table[i], table[i + 1], table[i + 2]);
    0.5 * (2.0 * p1
        + (p2 - p0) * f
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * f * f
        + (3.0 * (p1 - p2) + p3 - p0) * f * f * f)
}
