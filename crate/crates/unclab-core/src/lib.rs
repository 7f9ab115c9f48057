//! Decision procedures and numerical verification for weighted uncertainty
//! inequalities on `R^d` with two-piece power weights.
//!
//! The library has three layers:
//!
//! * exact case analyses that decide whether an inequality of the form
//!   `||f||_q <~ ||f |x|^A||_q + ||fhat |xi|^B||_p` holds and, when it does,
//!   produce the growth profile of the optimal constant ([`oracle`]);
//! * numerical evaluation of the norms involved, for concrete test functions
//!   (trigonometric polynomials, Gaussians, modulated bumps) ([`norms`]);
//! * sharp-constant estimators and extremizing families used to confirm the
//!   predicted growth rates independently of the case analyses ([`sharp`],
//!   [`extremizers`]).

pub mod extremizers;
pub mod norms;
pub mod oracle;
pub mod real;
pub mod sharp;
pub mod weights;

pub use extremizers::{
    balanced_tail_coeffs, build_modulated, dilate, falsify_symmetric, log_seq_coeffs,
    lower_bound_h, lower_bound_h_with, power_tail_coeffs, scaling_family_ratio, symmetric_ratio,
    BumpProfile, CounterexampleFamily, ExtremizerError, Falsification, FalsifyBudget, HOptions,
    HatMoments, LogSeq, ModulatedBumpFamily, PeakPlusTailFamily,
};
pub use norms::{ClosedFormFn, NormError, SampledRadialFn, TailBehavior, TrigPoly};
pub use oracle::{
    AsymProfile, AsymTerm, BetaIndex, Consistency, ExponentPair, HProfile, LogArg, Lp,
    OracleError, Verdict,
};
pub use real::{Ext, Real, REL_EQ_TOL};
pub use sharp::{
    estimate_discrete_constant, estimate_local_constant, fit_power_log, iterated_integral_constant,
    iterated_integral_cumulative, necessary_sup_constant, sup_product_constant,
    upperbound_via_splitting, Budget, ConstantEstimate, EstimateMethod, EstimateSettings,
    FitResult, Monotonicity, Regime, SharpError, WeightSpec, Witness,
};
pub use weights::{BrokenWeight, IntegralAsym, WeightError};
