//! Shared helpers for integration tests: a quadrature-based evaluation of the
//! weight integrals that does not go through the piecewise antiderivatives.

use unclab_core::norms::{integrate, QuadOpts};
use unclab_core::BrokenWeight;

/// Number of geometric refinement levels toward a singular endpoint. The
/// residual below the cutoff is a pure power and is added in closed form, so
/// accuracy does not depend on this being large.
const LEVELS: usize = 60;

fn opts() -> QuadOpts {
    QuadOpts::with_rel_tol(1e-12)
}

/// `int_0^x y^A dy` by panels; requires `a1 > -1`.
pub fn quad_integral_zero_to_x(a: BrokenWeight, x: f64) -> f64 {
    let a1 = a.a1.to_f64();
    let a2 = a.a2.to_f64();
    assert!(a1 > -1.0, "divergent at the origin");
    let m = x.min(1.0);
    let mut total = 0.0;
    // Geometric panels [m 2^{-k-1}, m 2^{-k}] absorb the origin singularity.
    let mut hi = m;
    for _ in 0..LEVELS {
        let lo = hi * 0.5;
        total += integrate(|y| y.powf(a1), lo, hi, &opts()).value;
        hi = lo;
    }
    // Below the cutoff the integrand is exactly a power; add its tail.
    total += hi.powf(a1 + 1.0) / (a1 + 1.0);
    if x > 1.0 {
        total += integrate(|y| y.powf(a2), 1.0, x, &opts()).value;
    }
    total
}

/// `int_x^inf y^{-A} dy` by panels; requires `a2 > 1`. Uses `u = 1/y`, which
/// maps the tail to an origin singularity of rate `a2 - 2 > -1`.
pub fn quad_integral_x_to_inf(a: BrokenWeight, x: f64) -> f64 {
    let a1 = a.a1.to_f64();
    let a2 = a.a2.to_f64();
    assert!(a2 > 1.0, "divergent at infinity");
    let m = (1.0 / x).min(1.0);
    let mut total = 0.0;
    let mut hi = m;
    for _ in 0..LEVELS {
        let lo = hi * 0.5;
        total += integrate(|u| u.powf(a2 - 2.0), lo, hi, &opts()).value;
        hi = lo;
    }
    total += hi.powf(a2 - 1.0) / (a2 - 1.0);
    if x < 1.0 {
        // Remaining piece u in [1, 1/x] corresponds to y in [x, 1].
        total += integrate(|u| u.powf(a1 - 2.0), 1.0, 1.0 / x, &opts()).value;
    }
    total
}
