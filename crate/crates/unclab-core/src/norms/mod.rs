//! Numerical evaluation of weighted norms for the test-function families.
//!
//! The layer has four parts: adaptive quadrature ([`quad`]), the shared
//! smooth bump profile and its tabulated transform ([`bump`]), torus norms of
//! trigonometric polynomials ([`trig`]), and weighted line/radial norms of
//! the closed-form families and sampled radial functions ([`closed`],
//! [`sampled`]).
//!
//! Conventions, fixed once for the whole layer: the Fourier transform is
//! `fhat(xi) = int f(x) e^{-2 pi i <x, xi>} dx` (so `exp(-pi x^2)` is
//! self-dual), and norms are computed on the line for `d = 1` and by radial
//! reduction with the surface factor `omega_{d-1}` for radial functions in
//! higher dimension.

pub mod bump;
pub mod closed;
pub mod quad;
pub mod sampled;
pub mod trig;

pub use closed::{fourier_transform, weighted_lq_norm, weighted_lq_norm_with, ClosedFormFn};
pub use quad::{integrate, integrate_auto, QuadOpts, QuadOutcome};
pub use sampled::{sampled_weighted_lq_norm, SampledRadialFn, TailBehavior};
pub use trig::{
    expected_random_sign_norm, trigpoly_grid_lq_norm, trigpoly_lq_norm, weighted_lp_seq_norm,
    TrigPoly,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The torus grids and the bump families are one-dimensional; only the
    /// radial Gaussian path accepts `d > 1`.
    #[error("dimension {0} is not supported for this family (only d = 1)")]
    Dimension(u32),
}
