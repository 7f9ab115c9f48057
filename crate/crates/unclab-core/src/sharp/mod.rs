//! Numerical estimation of the sharp constants whose growth the oracle
//! layer predicts symbolically, together with the slope-fitting used to
//! compare measurements against predicted exponents.
//!
//! The layer has four parts:
//!
//! * [`fit`]: least-squares extraction of `(power, logpow)` from measured
//!   `(argument, value)` series, with model selection between a pure power
//!   law and a power law with one logarithmic correction.
//! * [`estimate`]: certified lower bounds on the degree-constrained torus
//!   constant `sup_c ||T_c||_q / ||c||_{p,gamma}` and on the localized
//!   constant `sup_f ||f||_{L^q(|x| <= t)} / ||fhat |xi|^D||_p`. Exact
//!   corners (`q = 2`, `q = inf`, `p = 1`, `p = q = 2`) use closed-form
//!   extreme-point arguments; everything else runs projected gradient
//!   ascent from structured and random starts.
//! * [`appendix`]: the rearrangement-based constants that characterize
//!   weighted `(L^p, L^q)` Fourier inequalities for monotone radial
//!   weights: a sup-product constant, an iterated-integral constant for
//!   the `q < p` range, and the necessary-condition supremum for `p > 2`.
//! * [`splitting`]: evaluation of the near/far splitting upper bound
//!   `C(t) t^{L^T} ||fhat |xi|^B||_p + t^{-A} ||f |x|^A||_q` at a concrete
//!   witness, with the intermediate weight `D` (and `L = B - D`) chosen by
//!   the same case analysis the oracle encodes.
//!
//! Estimates report lower bounds by construction (a stored witness
//! certifies each value); only the grid-supremum method for the localized
//! constant is a heuristic on both sides, and it is flagged as such.

pub mod appendix;
pub mod estimate;
pub mod fit;
pub mod splitting;

pub use appendix::{
    iterated_integral_constant, iterated_integral_cumulative, necessary_sup_constant,
    sup_product_constant, Monotonicity, WeightSpec,
};
pub use estimate::{
    estimate_discrete_constant, estimate_local_constant, Budget, ConstantEstimate,
    EstimateMethod, EstimateSettings, Witness,
};
pub use fit::{fit_power_log, FitResult, Regime};
pub use splitting::upperbound_via_splitting;

use thiserror::Error;

use crate::norms::NormError;
use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SharpError {
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The requested evaluation sits outside the range where the splitting
    /// bound (or the constant being estimated) is finite.
    #[error("hypotheses violated: {0}")]
    HypothesesViolated(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
