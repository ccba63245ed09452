//! Explicit constants and height bounds, evaluated soundly in log space.

pub mod constants;
pub mod formulas;
pub mod report;

pub use constants::{constant, script_r, C3Variant, ConstParams, ConstValue};
pub use formulas::{
    best_unit_bound, bound_thm_1, bound_thm_2, bound_thm_2_full_group, bound_thm_a, bound_thm_a_sinf, bound_thm_b,
    bound_thm_c, eq31_s_factor, improvement_factor, lemma2_bound, lemma3_bound, prop5_lower_bound, BoundInputs,
    GroupData, Selection,
};
pub use report::{BoundReport, FormulaId, TaggedInterval, TaggedReal};
