//! Frequency ↔ spatial selection: per-session selection state, cross-domain
//! mapping, threshold-gated region growing and highlight payloads.

mod highlight;
mod selection;

pub use highlight::{highlight, ColumnMarks, DetailsMarks, HighlightPayload, MatrixMarks, PaneRequest};
pub use selection::{
    grow_selection, refine_by_level, select_cells, select_frequency, select_harmonics, LinkError, SelectionOrigin,
    SelectionState,
};
