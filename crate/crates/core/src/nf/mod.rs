//! Number-field core: exact elements, quadratic orders, ideals, class groups
//! and field profiles.

pub mod alg;
pub mod classgroup;
pub mod field;
pub mod ideal;
pub mod quad;

pub use alg::AlgNum;
pub use field::{
    build_quadratic_field, build_quadratic_field_with, build_rational_field, import_field_profile, AssertedRecord,
    FieldConfig, FieldKind, FieldProfile, Provenance,
};
pub use ideal::{PrimeIdeal, Splitting};
pub use classgroup::{interval_det, s_unit_basis};
