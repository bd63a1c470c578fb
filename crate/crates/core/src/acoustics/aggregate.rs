//! Band aggregation of harmonic levels and surface integration over regions.

use crate::model::frequency::{BandKind, FrequencyScheme};
use crate::model::spectrum::{LevelGrid, SpectrumTable};
use crate::num::Real;

use super::levels::{energy_sum_iter, level_from_energy, surface_energy, DomainError};

/// Per-cell band levels: energy sum over each band's harmonics.
/// Bands without harmonics stay undefined.
pub fn band_levels<T: Real>(
    spectra: &SpectrumTable<T>,
    scheme: &FrequencyScheme<T>,
    kind: BandKind,
) -> LevelGrid<T> {
    let bands = scheme.bands(kind);
    let mut grid = LevelGrid::new(spectra.cell_count(), bands.len());
    for cell in 0..spectra.cell_count() {
        let row = spectra.row(cell);
        for (b, band) in bands.iter().enumerate() {
            let level = energy_sum_iter(band.harmonics.iter().map(|&h| row[h])).ok();
            grid.set(cell, b, level);
        }
    }
    grid
}

/// Integral level of every region (rows) for every column of a per-cell table.
///
/// `column_level(cell, col)` yields the cell's level; a `None` anywhere in a
/// region's column leaves that region/column undefined.
pub fn region_integrals<T: Real>(
    region_cells: &[Vec<usize>],
    columns: usize,
    column_level: impl Fn(usize, usize) -> Option<T>,
    areas: &[T],
    reference_area: T,
    v0: T,
) -> Result<LevelGrid<T>, DomainError> {
    let mut grid = LevelGrid::new(region_cells.len(), columns);
    for (r, cells) in region_cells.iter().enumerate() {
        if cells.is_empty() {
            continue;
        }
        for col in 0..columns {
            if column_level(cells[0], col).is_none() {
                continue;
            }
            let energy = surface_energy(cells, |c| column_level(c, col).unwrap_or(T::neg_infinity()), areas, v0)?;
            grid.set(r, col, Some(level_from_energy(energy, reference_area, v0)?));
        }
    }
    Ok(grid)
}
