//! Whitney C¹ jets on set samples.
//!
//! A jet is a value plus a candidate differential at every sample point.
//! Whitney's compatibility condition is measured through the first-order
//! Taylor remainder
//!
//! ```text
//! R(z, w) = |f(z) − f(w) − df_w(z − w)| / |z − w|,
//! ```
//!
//! whose supremum over pairs with `|z − w| ≤ s` must go to zero with `s`.

mod determinacy;
mod jet;
mod modulus;

pub use determinacy::{determinacy_scan, DeterminacyRow};
pub use jet::{
    dbar_defect, locally_constant_jet, restrict_smooth, snowflake_zero_diff_jet, DbarDefect, Jet1, JetDoc,
    LocallyConstant, SampleRef,
};
pub use modulus::{
    holder_fit, whitney_modulus, whitney_modulus_bucketed, whitney_modulus_with_budget, ModulusRow, ModulusTable,
};
