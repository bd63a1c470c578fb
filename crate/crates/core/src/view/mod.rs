//! Renderer-independent view payloads: overview matrix, harmonics pane,
//! details pane, boxplots, stripes and colors.

pub mod boxplot;
pub mod details;
pub mod harmonics;
pub mod matrix;
pub mod palette;
pub mod ranked;
pub mod scale;
pub mod stripes;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{BandId, CellId, Dataset, HarmonicId, RegionId};
use crate::num::Real;

pub use boxplot::{box_summary, boxplot_stats, weighted_quantile, BoxStats, BoxSummary, Histogram, LimitStripe};
pub use details::{details_layout_id, details_pane, CategoryAreas, DetailsBar, DetailsPane, DetailsParams, DetailsSummary};
pub use harmonics::{
    critical_harmonics, harmonics_layout_id, harmonics_pane, HarmonicColumn, HarmonicsPane, HarmonicsParams, PaneBand,
    SortMode,
};
pub use matrix::{
    category_grid, matrix_overview, CellPayload, MatrixCell, MatrixColumn, MatrixMode, MatrixOverview, MatrixParams,
    MatrixRow,
};
pub use palette::{ColorToken, Palette, PaletteError};
pub use ranked::{layout_strip, rank_cells, ranked_strip, RankedStrip, Reduction, DEFAULT_MATRIX_ROWS, DEFAULT_PANE_ROWS};
pub use scale::{map_color, ColorScale, ScaleError, ScaleKind};
pub use stripes::{two_tone_stripes, Stripe, StripeList};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ViewError {
    #[error("unknown matrix mode {0:?}")]
    UnknownMode(String),
    #[error("unknown sort mode {0:?} (expected individual or by-selection)")]
    UnknownSort(String),
    #[error("sort mode by-selection requires an anchor harmonic")]
    AnchorRequired,
    #[error("anchor harmonic {harmonic} is not part of band {band}")]
    AnchorOutsideBand { harmonic: HarmonicId, band: String },
    #[error("region {0} has no cells")]
    EmptyRegion(String),
    #[error("{0}")]
    Parameter(String),
}

/// Active cells of `region` paired with their level in `band`; cells of an
/// empty band are skipped.
pub fn band_items<T: Real>(dataset: &Dataset<T>, region: RegionId, band: BandId) -> Vec<(CellId, T)> {
    dataset
        .region_cells(region)
        .iter()
        .filter_map(|&c| dataset.cell_band_level(c, band).map(|l| (c, l)))
        .collect()
}

/// Short digest of the dataset hash, a pane name and its layout parameters.
pub fn layout_id<T: Real, P: Serialize>(dataset: &Dataset<T>, pane: &str, params: &P) -> String {
    let mut h = Sha256::new();
    h.update(dataset.content_hash().as_bytes());
    h.update(pane.as_bytes());
    h.update(serde_json::to_vec(params).expect("layout parameters serialize"));
    hex::encode(&h.finalize()[..8])
}
