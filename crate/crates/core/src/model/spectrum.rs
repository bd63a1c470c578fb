use crate::num::Real;

use super::frequency::HarmonicId;
use super::mesh::CellId;

/// Per-cell velocity levels (dB) for every harmonic, row-major by cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable<T> {
    levels_db: Vec<T>,
    cells: usize,
    harmonics: usize,
    /// Reference velocity `v0` in m/s.
    pub reference_velocity: T,
    /// Reference area in m².
    pub reference_area: T,
}

impl<T: Real> SpectrumTable<T> {
    /// `levels_db.len()` must equal `cells * harmonics`.
    pub fn new(
        levels_db: Vec<T>,
        cells: usize,
        harmonics: usize,
        reference_velocity: T,
        reference_area: T,
    ) -> Option<Self> {
        (levels_db.len() == cells * harmonics).then_some(Self {
            levels_db,
            cells,
            harmonics,
            reference_velocity,
            reference_area,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn harmonic_count(&self) -> usize {
        self.harmonics
    }

    #[inline]
    pub fn level(&self, cell: CellId, harmonic: HarmonicId) -> T {
        self.levels_db[cell * self.harmonics + harmonic]
    }

    pub fn row(&self, cell: CellId) -> &[T] {
        &self.levels_db[cell * self.harmonics..(cell + 1) * self.harmonics]
    }

    pub fn values(&self) -> &[T] {
        &self.levels_db
    }

    /// First non-finite entry as `(cell, harmonic)`.
    pub fn first_non_finite(&self) -> Option<(CellId, HarmonicId)> {
        self.levels_db
            .iter()
            .position(|v| !v.is_finite())
            .map(|i| (i / self.harmonics.max(1), i % self.harmonics.max(1)))
    }
}

/// Dense row × column table of optional levels (dB); `None` marks an
/// undefined entry such as a band without harmonics.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelGrid<T> {
    rows: usize,
    cols: usize,
    values: Vec<Option<T>>,
}

impl<T: Copy> LevelGrid<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, values: vec![None; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Option<T> {
        self.values[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Option<T>) {
        self.values[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Option<T>] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Option<T>> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }
}
