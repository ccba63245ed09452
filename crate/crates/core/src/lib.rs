//! Exact arithmetic in ℚ and quadratic fields, heights, and sound evaluation
//! of explicit height bounds for S-unit, decomposable form and Thue equations.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod forms;
pub mod heights;
pub mod interval;
pub mod nf;
pub mod verify;

pub use error::{Error, Result};
pub use interval::Interval;
pub use nf::{AlgNum, FieldProfile, PrimeIdeal};
