//! Explicit test-function families witnessing the sharp growth rates: the
//! modulated-bump family (a smooth window carrying a trigonometric
//! polynomial), the peak-plus-tail family (a concentrated spike plus a
//! random-sign lattice tail), and plain dilation families.
//!
//! Each family exposes the weighted norms the uncertainty ratios are built
//! from, both as directly evaluated integrals and as the predicted
//! closed-form proxies they track within fixed bracket constants. On top of
//! the families sit [`lower_bound_h`] (constructive lower bounds for the
//! additive-inequality constant) and [`falsify_symmetric`] (a counterexample
//! search for the symmetric product inequality outside its validity region).

mod falsify;
mod hlower;
mod modulated;
mod peak_tail;
mod periodized;
mod scaling;

pub use falsify::{
    falsify_symmetric, CounterexampleFamily, Falsification, FalsifyBudget,
};
pub use hlower::{lower_bound_h, lower_bound_h_with, HOptions};
pub use modulated::{build_modulated, ModulatedBumpFamily};
pub use peak_tail::{
    balanced_tail_coeffs, log_seq_coeffs, power_tail_coeffs, HatMoments, LogSeq,
    PeakPlusTailFamily,
};
pub use scaling::{dilate, scaling_family_ratio, symmetric_ratio};

use thiserror::Error;

use crate::norms::NormError;
use crate::sharp::SharpError;

#[derive(Debug, Error)]
pub enum ExtremizerError {
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Every norm of the witness vanishes, so no ratio is defined.
    #[error("degenerate witness: all norms vanish")]
    Degenerate,
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Sharp(#[from] SharpError),
}

/// Which of the two window profiles a family is built from. The two differ
/// in where the compact support sits: on the frequency side for the
/// modulated bumps (spread window, lattice-cell transform) and on the space
/// side for the peak-plus-tail sums (compact window, spread transform).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BumpProfile {
    /// Space window `dual_profile`, transform supported in `|xi| <= 1/4`.
    SpreadWindow,
    /// Space window `compact_profile` supported in `|x| <= 1/4`.
    CompactWindow,
}
