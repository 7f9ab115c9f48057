//! Decision routines for weighted Fourier uncertainty inequalities.
//!
//! Each routine answers a yes/no or growth-rate question exactly, by case
//! analysis on the exponents and weight powers; floating point enters only
//! through [`Real`](crate::real::Real)'s three-valued comparisons. The
//! submodules split by question:
//!
//! - [`nonsym`]: does `‖f‖ ≲ ‖|x|^α f‖^θ ‖|ξ|^β f̂‖^{1-θ}` hold for plain
//!   power weights?
//! - [`symmetric`]: does `‖f‖_p ‖f̂‖_{p'} ≲ ‖x^A f‖_p ‖ξ^B f̂‖_{p'}` hold for
//!   broken power weights?
//! - [`local`], [`discrete`]: growth of the best constant in the truncated
//!   inequalities (ball of radius `t`, modes up to `M`).
//! - [`hprofile`]: growth of the two-weight comparison function `H`.
//! - [`consistency`]: cross-checks the yes/no answers against the growth
//!   profiles on their common domain.

pub mod consistency;
pub mod discrete;
pub mod exponents;
pub mod hprofile;
pub mod local;
pub mod nonsym;
pub mod profile;
pub mod symmetric;

pub use consistency::{check_consistency, Consistency};
pub use discrete::discrete_constant_profile;
pub use exponents::{ExponentPair, Lp};
pub use hprofile::{h_profile, HProfile};
pub use local::local_constant_profile;
pub use nonsym::{classify_nonsymmetric, Verdict};
pub use profile::{AsymProfile, AsymTerm, BetaIndex, LogArg};
pub use symmetric::classify_symmetric;

/// Rejections from the classification routines. These are contract
/// violations on the inputs, not "inequality fails" verdicts; the latter
/// are ordinary `Ok` values.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    /// Malformed or out-of-range Lebesgue exponent.
    #[error("bad exponent: {0}")]
    Exponent(String),

    /// A weight power that must be strictly positive is not.
    #[error("weight powers must be strictly positive, got {0}")]
    NonPositiveWeight(String),

    /// A weight power that must be nonnegative is negative.
    #[error("weight power must be nonnegative, got {0}")]
    NegativeWeight(String),

    /// The symmetric classifier is normalized to p ≥ 2. For p < 2 the
    /// two sides trade places under duality, so the caller should swap.
    #[error("p < 2: swap the roles (p ↔ p', A ↔ B) and classify again")]
    SwapRoles,
}
