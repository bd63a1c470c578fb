//! Harmonics pane: one ranked column per harmonic of a band.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{BandId, CellId, Dataset, HarmonicId, RegionId};
use crate::num::Real;

use super::palette::ColorToken;
use super::ranked::{layout_strip, rank_cells, RankedStrip, Reduction, DEFAULT_PANE_ROWS};
use super::scale::{map_color, ColorScale, ScaleKind};
use super::{layout_id, ViewError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SortMode {
    /// Every column ranked on its own.
    Individual,
    /// All columns share the cell order of the anchor harmonic.
    BySelection,
}

impl FromStr for SortMode {
    type Err = ViewError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "individual" => Ok(Self::Individual),
            "by-selection" | "selection" => Ok(Self::BySelection),
            other => Err(ViewError::UnknownSort(other.to_string())),
        }
    }
}

/// Harmonic group shown by the pane: a band, or the harmonics outside every band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaneBand {
    Band(BandId),
    OutOfBand,
}

impl PaneBand {
    pub fn harmonics<T: Real>(self, dataset: &Dataset<T>) -> Vec<HarmonicId> {
        match self {
            Self::Band(b) => dataset.scheme.band(b).harmonics.clone(),
            Self::OutOfBand => dataset.scheme.out_of_band(),
        }
    }

    pub fn label<T: Real>(self, dataset: &Dataset<T>) -> String {
        match self {
            Self::Band(b) => dataset.scheme.band_label(b),
            Self::OutOfBand => "out-of-band".into(),
        }
    }

    /// Accepts band labels (`630`, `oct:500`) and `out-of-band`.
    pub fn parse<T: Real>(dataset: &Dataset<T>, label: &str) -> Option<Self> {
        if label == "out-of-band" {
            return Some(Self::OutOfBand);
        }
        dataset.scheme.band_by_label(label).map(Self::Band)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicsParams<T> {
    pub region: RegionId,
    pub band: PaneBand,
    pub rows: usize,
    pub sort: SortMode,
    pub anchor: Option<HarmonicId>,
    pub reduction: Reduction,
    pub scale: ColorScale<T>,
}

impl<T: Real> HarmonicsParams<T> {
    pub fn new(region: RegionId, band: PaneBand) -> Self {
        Self {
            region,
            band,
            rows: DEFAULT_PANE_ROWS,
            sort: SortMode::Individual,
            anchor: None,
            reduction: Reduction::Max,
            scale: ColorScale::standard(ScaleKind::Linear),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicColumn<T> {
    pub harmonic: HarmonicId,
    pub frequency_hz: T,
    /// Region integral level of this harmonic.
    pub integral_level: Option<T>,
    /// Row values from row 0 (start of the layout) upward.
    pub values: Vec<Option<T>>,
    pub tokens: Vec<ColorToken>,
    pub contributors: Vec<Vec<CellId>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicsPane<T> {
    pub region: String,
    pub band: String,
    pub rows: usize,
    pub sort: SortMode,
    pub anchor: Option<HarmonicId>,
    pub layout_id: String,
    pub columns: Vec<HarmonicColumn<T>>,
}

impl<T> HarmonicsPane<T> {
    pub fn column(&self, harmonic: HarmonicId) -> Option<&HarmonicColumn<T>> {
        self.columns.iter().find(|c| c.harmonic == harmonic)
    }
}

/// Layout identifier of a pane computed from `params` on `dataset`.
pub fn harmonics_layout_id<T: Real>(dataset: &Dataset<T>, params: &HarmonicsParams<T>) -> String {
    layout_id(dataset, "harmonics", params)
}

pub fn harmonics_pane<T: Real>(dataset: &Dataset<T>, params: &HarmonicsParams<T>) -> Result<HarmonicsPane<T>, ViewError> {
    let harmonics = params.band.harmonics(dataset);
    let cells = dataset.region_cells(params.region);
    if cells.is_empty() {
        return Err(ViewError::EmptyRegion(dataset.partition.name(params.region).to_string()));
    }
    let shared_order = match params.sort {
        SortMode::Individual => None,
        SortMode::BySelection => {
            let anchor = params.anchor.ok_or(ViewError::AnchorRequired)?;
            if !harmonics.contains(&anchor) {
                return Err(ViewError::AnchorOutsideBand { harmonic: anchor, band: params.band.label(dataset) });
            }
            let mut items: Vec<(CellId, T)> = cells.iter().map(|&c| (c, dataset.cell_harmonic_level(c, anchor))).collect();
            rank_cells(&mut items);
            Some(items.into_iter().map(|(c, _)| c).collect::<Vec<_>>())
        }
    };
    let area = |c: CellId| dataset.areas()[c];
    let columns = harmonics
        .iter()
        .map(|&h| {
            let strip: RankedStrip<T> = match &shared_order {
                Some(order) => {
                    let items: Vec<_> = order.iter().map(|&c| (c, dataset.cell_harmonic_level(c, h))).collect();
                    layout_strip(&items, area, params.rows, params.reduction)
                }
                None => {
                    let mut items: Vec<_> = cells.iter().map(|&c| (c, dataset.cell_harmonic_level(c, h))).collect();
                    rank_cells(&mut items);
                    layout_strip(&items, area, params.rows, params.reduction)
                }
            };
            HarmonicColumn {
                harmonic: h,
                frequency_hz: dataset.scheme.harmonics_hz[h],
                integral_level: dataset.integral_harmonic_level(params.region, h),
                tokens: strip
                    .values
                    .iter()
                    .map(|v| v.map_or(ColorToken::Undefined, |v| map_color(v, &params.scale)))
                    .collect(),
                values: strip.values,
                contributors: strip.contributors,
            }
        })
        .collect();
    Ok(HarmonicsPane {
        region: dataset.partition.name(params.region).to_string(),
        band: params.band.label(dataset),
        rows: params.rows.max(1),
        sort: params.sort,
        anchor: params.anchor.filter(|_| params.sort == SortMode::BySelection),
        layout_id: harmonics_layout_id(dataset, params),
        columns,
    })
}

/// The `k` harmonics of a band with the highest TOTAL integral level,
/// loudest first (ties by harmonic index).
pub fn critical_harmonics<T: Real>(dataset: &Dataset<T>, band: PaneBand, k: usize) -> Vec<HarmonicId> {
    let mut items: Vec<(HarmonicId, T)> = band
        .harmonics(dataset)
        .into_iter()
        .filter_map(|h| dataset.integral_harmonic_level(RegionId::TOTAL, h).map(|l| (h, l)))
        .collect();
    rank_cells(&mut items);
    items.into_iter().take(k).map(|(h, _)| h).collect()
}
