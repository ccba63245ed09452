//! Absolute values, heights, and finite sets of places.

pub mod height;
pub mod sspec;

pub use height::{
    abs_value, abs_value_exact, big_h, height, height_by_places, infinite_places, local_height, max_heights, ExactLog,
    HeightValue, Place,
};
pub use sspec::{is_s_integral, place_stats, s_norm, s_regulator, PlaceStats, SRegulator, SRegulatorExact, SSpec};
