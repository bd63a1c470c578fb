//! Velocity level formulas, band aggregation, surface integration,
//! acceptance classification and the Campbell matrix.

pub mod acceptance;
pub mod aggregate;
pub mod campbell;
pub mod levels;

pub use acceptance::{
    classify, derive_discrete_limits, discrete_limit, Acceptance, AcceptanceCategory, DEFAULT_SHADES, MAX_SHADES,
};
pub use aggregate::{band_levels, region_integrals};
pub use campbell::{campbell, CampbellError, CampbellMatrix};
pub use levels::{
    energy_sum, energy_sum_iter, integral_level, level_to_velocity, velocity_to_level, DomainError,
};
