//! Decomposable forms: parsing, factorization, the graphs on linear factors,
//! and the reduction to unit equations with an explicit bound.

pub mod factor;
pub mod linalg;
pub mod parse;
pub mod poly;

pub use factor::{factorize, verify_factors, Factorization, LinearForm};
pub use poly::Poly;

pub mod graph;

pub use graph::{build_graph_g, build_graph_h, build_l0, check_conditions, FormSystem, GraphG, GraphH, Verdict};

pub(crate) fn ser_interval<S: serde::Serializer>(x: &crate::interval::Interval, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&crate::bounds::TaggedInterval::from(x), s)
}

pub mod reduce;

pub use reduce::{reduce_to_unit_equations, UnitEquation, UnitEquationSystem};

pub mod thm3;

pub use thm3::{bound_thm_3, Thm3Report, TraceStep};
