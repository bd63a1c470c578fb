use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{BandId, CellId, Dataset, HarmonicId, RegionId};
use crate::num::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("unknown region {0:?}")]
    UnknownRegion(String),
    #[error("unknown band {0:?}")]
    UnknownBand(String),
    #[error("unknown cell id {0}")]
    UnknownCell(CellId),
    #[error("unknown harmonic {0}")]
    UnknownHarmonic(HarmonicId),
    #[error("harmonic {harmonic} outside band {band}")]
    HarmonicOutsideBand { harmonic: HarmonicId, band: String },
    #[error("no band selected")]
    NoBand,
    #[error("steps must be at least 1")]
    Steps,
    #[error("{pane} layout mismatch: expected {expected}, got {got}")]
    LayoutMismatch { pane: String, expected: String, got: String },
    #[error(transparent)]
    View(#[from] crate::view::ViewError),
}

/// How the current cell set was made.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionOrigin {
    #[default]
    None,
    /// Derived from a region pick in the frequency domain.
    Frequency,
    /// Picked, grown or refined in the spatial domain.
    Spatial,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SelectionState {
    pub selected_cells: BTreeSet<CellId>,
    pub selected_region: Option<String>,
    pub selected_band: Option<BandId>,
    pub selected_harmonics: BTreeSet<HarmonicId>,
    /// `false` for a hover preview, `true` once clicked.
    pub frozen: bool,
    pub origin: SelectionOrigin,
}

impl SelectionState {
    pub fn is_empty(&self) -> bool {
        self.selected_cells.is_empty()
            && self.selected_region.is_none()
            && self.selected_band.is_none()
            && self.selected_harmonics.is_empty()
    }
}

fn check_harmonics<T: Real>(dataset: &Dataset<T>, band: BandId, harmonics: &[HarmonicId]) -> Result<(), LinkError> {
    let members = &dataset.scheme.band(band).harmonics;
    for &h in harmonics {
        if h >= dataset.scheme.harmonic_count() {
            return Err(LinkError::UnknownHarmonic(h));
        }
        if !members.contains(&h) {
            return Err(LinkError::HarmonicOutsideBand { harmonic: h, band: dataset.scheme.band_label(band) });
        }
    }
    Ok(())
}

/// Selects a (region, band) pair and optionally some of the band's harmonics.
///
/// The cell set becomes the region's cells, unless the current cells came
/// from a spatial pick that overlaps the region; then the overlap is kept.
pub fn select_frequency<T: Real>(
    state: &SelectionState,
    dataset: &Dataset<T>,
    region: RegionId,
    band: BandId,
    harmonics: &[HarmonicId],
    frozen: bool,
) -> Result<SelectionState, LinkError> {
    if region.0 >= dataset.partition.row_count() {
        return Err(LinkError::UnknownRegion(format!("#{}", region.0)));
    }
    if band.pos >= dataset.scheme.bands(band.kind).len() {
        return Err(LinkError::UnknownBand(format!("{:?} #{}", band.kind, band.pos)));
    }
    check_harmonics(dataset, band, harmonics)?;
    let region_cells = dataset.region_cells(region);
    let kept: BTreeSet<CellId> = if state.origin == SelectionOrigin::Spatial {
        region_cells.iter().copied().filter(|c| state.selected_cells.contains(c)).collect()
    } else {
        BTreeSet::new()
    };
    let (cells, origin) = if kept.is_empty() {
        (region_cells.iter().copied().collect(), SelectionOrigin::Frequency)
    } else {
        (kept, SelectionOrigin::Spatial)
    };
    Ok(SelectionState {
        selected_cells: cells,
        selected_region: Some(dataset.partition.name(region).to_string()),
        selected_band: Some(band),
        selected_harmonics: harmonics.iter().copied().collect(),
        frozen,
        origin,
    })
}

/// Replaces the harmonic selection; every harmonic must lie in the selected band.
pub fn select_harmonics<T: Real>(
    state: &SelectionState,
    dataset: &Dataset<T>,
    harmonics: &[HarmonicId],
) -> Result<SelectionState, LinkError> {
    if let Some(&h) = harmonics.iter().find(|&&h| h >= dataset.scheme.harmonic_count()) {
        return Err(LinkError::UnknownHarmonic(h));
    }
    let band = match state.selected_band {
        Some(b) => b,
        None if harmonics.is_empty() => {
            return Ok(SelectionState { selected_harmonics: BTreeSet::new(), ..state.clone() });
        }
        None => {
            return Err(LinkError::HarmonicOutsideBand { harmonic: harmonics[0], band: "(none)".into() });
        }
    };
    check_harmonics(dataset, band, harmonics)?;
    Ok(SelectionState { selected_harmonics: harmonics.iter().copied().collect(), ..state.clone() })
}

/// Replaces (or with `extend`, adds to) the selected cells.
pub fn select_cells<T: Real>(
    state: &SelectionState,
    dataset: &Dataset<T>,
    cells: &[CellId],
    extend: bool,
) -> Result<SelectionState, LinkError> {
    if let Some(&bad) = cells.iter().find(|&&c| c >= dataset.cell_count()) {
        return Err(LinkError::UnknownCell(bad));
    }
    let mut next = state.clone();
    if !extend {
        next.selected_cells.clear();
    }
    next.selected_cells.extend(cells.iter().copied().filter(|&c| dataset.is_active(c)));
    next.origin = SelectionOrigin::Spatial;
    Ok(next)
}

/// Level used by the growth filter: the band level, or the loudest selected
/// harmonic of that band when harmonics are selected.
fn growth_level<T: Real>(dataset: &Dataset<T>, cell: CellId, band: BandId, harmonics: &BTreeSet<HarmonicId>) -> Option<T> {
    if harmonics.is_empty() {
        dataset.cell_band_level(cell, band)
    } else {
        harmonics.iter().map(|&h| dataset.cell_harmonic_level(cell, h)).reduce(T::max)
    }
}

/// Adds, `steps` times, every edge neighbour of the current set whose level
/// is at least `min_level` (unfiltered when `min_level` is `None`).
pub fn grow_selection<T: Real>(
    state: &SelectionState,
    dataset: &Dataset<T>,
    steps: usize,
    min_level: Option<T>,
    band: BandId,
) -> Result<SelectionState, LinkError> {
    if steps == 0 {
        return Err(LinkError::Steps);
    }
    if band.pos >= dataset.scheme.bands(band.kind).len() {
        return Err(LinkError::UnknownBand(format!("{:?} #{}", band.kind, band.pos)));
    }
    let harmonics: BTreeSet<HarmonicId> = if state.selected_band == Some(band) {
        state.selected_harmonics.clone()
    } else {
        BTreeSet::new()
    };
    let passes = |c: CellId| {
        dataset.is_active(c)
            && match min_level {
                None => true,
                Some(min) => growth_level(dataset, c, band, &harmonics).is_some_and(|l| l >= min),
            }
    };
    let adjacency = dataset.adjacency();
    let mut cells = state.selected_cells.clone();
    let mut frontier: Vec<CellId> = cells.iter().copied().collect();
    for _ in 0..steps {
        let mut next = Vec::new();
        for &c in &frontier {
            for &n in adjacency.neighbors(c) {
                if !cells.contains(&n) && passes(n) {
                    cells.insert(n);
                    next.push(n);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(SelectionState { selected_cells: cells, origin: SelectionOrigin::Spatial, ..state.clone() })
}

/// Keeps the selected cells whose band level lies in `[low, high]`.
pub fn refine_by_level<T: Real>(
    state: &SelectionState,
    dataset: &Dataset<T>,
    band: BandId,
    low: T,
    high: T,
) -> SelectionState {
    let cells = state
        .selected_cells
        .iter()
        .copied()
        .filter(|&c| dataset.cell_band_level(c, band).is_some_and(|l| l >= low && l <= high))
        .collect();
    SelectionState { selected_cells: cells, origin: SelectionOrigin::Spatial, ..state.clone() }
}
