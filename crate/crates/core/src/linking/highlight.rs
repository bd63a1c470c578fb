use std::collections::BTreeSet;

use serde::Serialize;

use crate::acoustics::{classify, AcceptanceCategory};
use crate::model::{BandKind, CellId, Dataset, HarmonicId};
use crate::num::Real;
use crate::view::{
    details_layout_id, details_pane, harmonics_layout_id, harmonics_pane, DetailsParams, HarmonicsParams,
};

use super::selection::{LinkError, SelectionState};

/// A displayed pane together with the layout id it was rendered with.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "pane", rename_all = "kebab-case")]
pub enum PaneRequest<T> {
    Matrix { kind: BandKind },
    Harmonics { params: HarmonicsParams<T>, layout_id: String },
    Details { params: DetailsParams<T>, layout_id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MatrixMarks {
    pub kind: Option<BandKind>,
    /// `[row, column]` pairs whose region overlaps the selection.
    pub cells: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnMarks {
    pub harmonic: HarmonicId,
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetailsMarks<T> {
    /// Marked rows of the three level bars.
    pub bar_rows: [Vec<usize>; 3],
    /// Selected area per category (Acceptable, Borderline, Unacceptable,
    /// Undefined) as a share of the region's area.
    pub category_shares: [T; 4],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct HighlightPayload<T> {
    pub matrix: Vec<MatrixMarks>,
    pub harmonics: Vec<Vec<ColumnMarks>>,
    pub details: Vec<DetailsMarks<T>>,
    /// Selected cells, ascending.
    pub mask: Vec<CellId>,
}

impl<T> HighlightPayload<T> {
    pub fn is_empty(&self) -> bool {
        self.mask.is_empty() && self.matrix.is_empty() && self.harmonics.is_empty() && self.details.is_empty()
    }
}

fn check_layout(pane: &str, expected: String, got: &str) -> Result<(), LinkError> {
    if expected != got {
        return Err(LinkError::LayoutMismatch { pane: pane.into(), expected, got: got.into() });
    }
    Ok(())
}

/// Highlight marks of the current selection in every requested pane.
///
/// Each harmonics or details request must carry the layout id the pane was
/// rendered with; a different id means the client shows a stale layout.
pub fn highlight<T: Real>(
    state: &SelectionState,
    dataset: &Dataset<T>,
    panes: &[PaneRequest<T>],
) -> Result<HighlightPayload<T>, LinkError> {
    for pane in panes {
        match pane {
            PaneRequest::Matrix { .. } => {}
            PaneRequest::Harmonics { params, layout_id } => {
                check_layout("harmonics", harmonics_layout_id(dataset, params), layout_id)?
            }
            PaneRequest::Details { params, layout_id } => {
                check_layout("details", details_layout_id(dataset, params), layout_id)?
            }
        }
    }
    let selected = &state.selected_cells;
    if selected.is_empty() {
        return Ok(HighlightPayload { matrix: Vec::new(), harmonics: Vec::new(), details: Vec::new(), mask: Vec::new() });
    }
    let hit = |c: CellId| selected.contains(&c);
    let mut payload = HighlightPayload { mask: selected.iter().copied().collect(), ..Default::default() };
    for pane in panes {
        match pane {
            PaneRequest::Matrix { kind } => {
                let rows: BTreeSet<usize> = selected.iter().flat_map(|&c| [0, dataset.region_of(c).0]).collect();
                let columns = dataset.scheme.bands(*kind).len();
                let cells = rows.iter().flat_map(|&r| (0..columns).map(move |b| [r, b])).collect();
                payload.matrix.push(MatrixMarks { kind: Some(*kind), cells });
            }
            PaneRequest::Harmonics { params, .. } => {
                let pane = harmonics_pane(dataset, params)?;
                let marks = pane
                    .columns
                    .iter()
                    .map(|col| ColumnMarks {
                        harmonic: col.harmonic,
                        rows: (0..col.contributors.len())
                            .filter(|&r| col.contributors[r].iter().any(|&c| hit(c)))
                            .collect(),
                    })
                    .collect();
                payload.harmonics.push(marks);
            }
            PaneRequest::Details { params, .. } => {
                let pane = details_pane(dataset, params)?;
                let bar_rows = [0, 1, 2].map(|i| pane.bars[i].strip.rows_touching(hit));
                let width = dataset.borderline_width();
                let discrete = dataset.discrete_limit(params.band);
                let mut shares = [T::zero(); 4];
                for &c in dataset.region_cells(params.region).iter().filter(|&&c| hit(c)) {
                    let slot = match dataset.cell_band_level(c, params.band).map(|l| classify(l, discrete, width, 1).category) {
                        Some(AcceptanceCategory::Acceptable) => 0,
                        Some(AcceptanceCategory::Borderline) => 1,
                        Some(AcceptanceCategory::Unacceptable) => 2,
                        _ => 3,
                    };
                    shares[slot] = shares[slot] + dataset.areas()[c];
                }
                let area = dataset.region_area(params.region);
                payload.details.push(DetailsMarks { bar_rows, category_shares: shares.map(|s| s / area) });
            }
        }
    }
    Ok(payload)
}
