//! Velocity level conversions and decibel energy summation.

use thiserror::Error;

use crate::num::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("velocity must be positive, got {0}")]
    Velocity(f64),
    #[error("reference velocity must be positive, got {0}")]
    Reference(f64),
    #[error("reference area must be positive, got {0}")]
    ReferenceArea(f64),
    #[error("cannot sum an empty list of levels")]
    EmptySum,
    #[error("cannot integrate over an empty cell set")]
    EmptyCellSet,
    #[error("cell {0} has non-positive area")]
    Area(usize),
}

fn check_reference<T: Real>(v0: T) -> Result<(), DomainError> {
    if v0 > T::zero() && v0.is_finite() {
        Ok(())
    } else {
        Err(DomainError::Reference(v0.as_f64()))
    }
}

/// `L_v = 20 log10(v / v0)` in dB.
pub fn velocity_to_level<T: Real>(v: T, v0: T) -> Result<T, DomainError> {
    check_reference(v0)?;
    if !(v > T::zero()) {
        return Err(DomainError::Velocity(v.as_f64()));
    }
    Ok(T::lit(20.0) * (v / v0).log10())
}

/// Inverse of [`velocity_to_level`]: `v = v0 * 10^(L / 20)`.
pub fn level_to_velocity<T: Real>(level: T, v0: T) -> Result<T, DomainError> {
    check_reference(v0)?;
    Ok(v0 * T::lit(10.0).powf(level / T::lit(20.0)))
}

/// `10 log10(Σ 10^(L_i / 10))`, evaluated relative to the largest term.
pub fn energy_sum_iter<T: Real>(levels: impl IntoIterator<Item = T> + Clone) -> Result<T, DomainError> {
    let max = levels
        .clone()
        .into_iter()
        .fold(None, |m: Option<T>, l| Some(m.map_or(l, |m| m.max(l))))
        .ok_or(DomainError::EmptySum)?;
    let ten = T::lit(10.0);
    let sum: T = levels.into_iter().map(|l| ten.powf((l - max) / ten)).sum();
    Ok(max + ten * sum.log10())
}

pub fn energy_sum<T: Real>(levels: &[T]) -> Result<T, DomainError> {
    energy_sum_iter(levels.iter().copied())
}

/// Velocity-squared energy `Σ A_i v_i²` of a set of cells.
pub fn surface_energy<T: Real>(
    cells: &[usize],
    levels: impl Fn(usize) -> T,
    areas: &[T],
    v0: T,
) -> Result<T, DomainError> {
    if cells.is_empty() {
        return Err(DomainError::EmptyCellSet);
    }
    let mut energy = T::zero();
    for &c in cells {
        let area = areas[c];
        if !(area > T::zero()) {
            return Err(DomainError::Area(c));
        }
        let v = level_to_velocity(levels(c), v0)?;
        energy = energy + area * v * v;
    }
    Ok(energy)
}

/// Level of the area-integrated velocity for a given `Σ A_i v_i²`.
pub fn level_from_energy<T: Real>(energy: T, reference_area: T, v0: T) -> Result<T, DomainError> {
    if !(reference_area > T::zero()) {
        return Err(DomainError::ReferenceArea(reference_area.as_f64()));
    }
    velocity_to_level((energy / reference_area).sqrt(), v0)
}

/// Integral velocity level: `v_int = sqrt(Σ A_i v_i² / A_ref)`, expressed in dB.
pub fn integral_level<T: Real>(
    cells: &[usize],
    levels: &[T],
    areas: &[T],
    reference_area: T,
    v0: T,
) -> Result<T, DomainError> {
    let energy = surface_energy(cells, |c| levels[c], areas, v0)?;
    level_from_energy(energy, reference_area, v0)
}
