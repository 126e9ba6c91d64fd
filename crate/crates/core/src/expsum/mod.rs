//! Exponential sums over sifted sets at well-spaced frequencies, `L^ℓ` norms,
//! both sides of the restriction and large-sieve inequalities, and the
//! explicit-constant machinery.

pub mod census;
pub mod constants;
pub mod eulerian;
pub mod kernel;
pub mod majorant_property;
pub mod profile;
pub mod quadrature;
pub mod summation;
pub mod theorems;
pub mod wellspaced;

pub use census::{level_set_census, Census, LevelSet};
pub use constants::{c_kappa, c_kappa_k, explicit_constant, y_to_t_check, ExplicitConstant};
pub use eulerian::{carlitz_check, eulerian, eulerian_eval, CarlitzResidual};
pub use kernel::{eval_expsum, eval_fast, eval_naive, ExpSums, Kernel};
pub use majorant_property::{majorant_ratio, LowerBoundCheck, MajorantRatio};
pub use profile::{CoefficientProfile, FrequencyFunction};
pub use quadrature::{lp_norm, lp_norm_with, rectangle_rule, LpNorm};
pub use theorems::{
    dual_row, duality_check, large_sieve_row, restriction_row, rows_to_csv, rows_to_jsonl, wellspaced_row, DualityCheck,
    InequalityRow, RowContext, TheoremTag, CSV_HEADER,
};
pub use wellspaced::{farey_set, grid_set, min_gap, WellSpacedSet};
