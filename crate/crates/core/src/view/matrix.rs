//! Region × band overview matrix in its display modes.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::acoustics::{classify, Acceptance, AcceptanceCategory, DEFAULT_SHADES};
use crate::model::{BandId, BandKind, Dataset, RegionId};
use crate::num::Real;

use super::palette::ColorToken;
use super::ranked::{ranked_strip, RankedStrip, Reduction, DEFAULT_MATRIX_ROWS};
use super::scale::{map_color, ColorScale, ScaleKind};
use super::stripes::{two_tone_stripes, StripeList};
use super::{band_items, ViewError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixMode {
    /// Integral level category as a flat color.
    Limits,
    /// Two-tone stripes of the integral level.
    TwoTone,
    /// Ranked cell levels colored by their discrete-limit category.
    DiscreteLimits,
    /// Two-tone on the left half, discrete limits on the right half.
    Combined,
    /// Ranked cell levels colored by the diverging scale.
    Raw,
    /// Category of the loudest cell against the discrete limit.
    WorstCell,
}

impl MatrixMode {
    pub const ALL: [MatrixMode; 6] = [
        Self::Limits,
        Self::TwoTone,
        Self::DiscreteLimits,
        Self::Combined,
        Self::Raw,
        Self::WorstCell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Limits => "limits",
            Self::TwoTone => "two-tone",
            Self::DiscreteLimits => "discrete-limits",
            Self::Combined => "combined",
            Self::Raw => "raw",
            Self::WorstCell => "worst-cell",
        }
    }
}

impl FromStr for MatrixMode {
    type Err = ViewError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| ViewError::UnknownMode(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixParams<T> {
    pub mode: MatrixMode,
    pub kind: BandKind,
    pub shades: u8,
    /// Rows of the ranked strips in the discrete-limit and raw modes.
    pub rows: usize,
    pub scale: ColorScale<T>,
    pub reduction: Reduction,
}

impl<T: Real> Default for MatrixParams<T> {
    fn default() -> Self {
        Self {
            mode: MatrixMode::Limits,
            kind: BandKind::ThirdOctave,
            shades: DEFAULT_SHADES,
            rows: DEFAULT_MATRIX_ROWS,
            scale: ColorScale::standard(ScaleKind::Linear),
            reduction: Reduction::Max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CellPayload<T> {
    Flat { token: ColorToken },
    TwoTone { stripes: StripeList<T> },
    Ranked { stripes: StripeList<T> },
    Combined { left: StripeList<T>, right: StripeList<T> },
    Raw { stripes: StripeList<T> },
}

impl<T: Real> CellPayload<T> {
    /// One-line form used in CSV exports.
    pub fn describe(&self) -> String {
        match self {
            Self::Flat { token } => token.to_string(),
            Self::TwoTone { stripes } | Self::Ranked { stripes } | Self::Raw { stripes } => stripes.describe(),
            Self::Combined { left, right } => format!("{}|{}", left.describe(), right.describe()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixCell<T> {
    /// Region integral level in this band.
    pub level: Option<T>,
    pub excess: Option<T>,
    /// Classification of the integral level against the integral limit.
    pub acceptance: Acceptance,
    pub payload: CellPayload<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixRow<T> {
    pub region: String,
    pub area: T,
    /// Region area divided by TOTAL area.
    pub height_fraction: T,
    pub cells: Vec<MatrixCell<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixColumn<T> {
    pub band: BandId,
    pub label: String,
    pub center_hz: T,
    pub lower_hz: T,
    pub upper_hz: T,
    pub harmonic_count: usize,
    pub integral_limit: Option<T>,
    pub discrete_limit: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixOverview<T> {
    pub mode: MatrixMode,
    pub kind: BandKind,
    pub shades: u8,
    pub columns: Vec<MatrixColumn<T>>,
    /// TOTAL first, then the regions in partition order.
    pub rows: Vec<MatrixRow<T>>,
}

impl<T: Real> MatrixOverview<T> {
    pub fn cell(&self, region: RegionId, column: usize) -> &MatrixCell<T> {
        &self.rows[region.0].cells[column]
    }

    pub fn total_row_levels(&self) -> Vec<Option<T>> {
        self.rows[0].cells.iter().map(|c| c.level).collect()
    }
}

fn ranked_stripes<T: Real>(strip: &RankedStrip<T>, token: impl Fn(T) -> ColorToken) -> StripeList<T> {
    StripeList::from_weights(strip.values.iter().rev().filter_map(|v| v.map(|v| (token(v), T::one()))))
}

pub fn matrix_overview<T: Real>(dataset: &Dataset<T>, params: &MatrixParams<T>) -> MatrixOverview<T> {
    let width = dataset.borderline_width();
    let shades = params.shades.max(1);
    let bands = dataset.band_ids(params.kind);
    let columns = bands
        .iter()
        .map(|&band| {
            let b = dataset.scheme.band(band);
            MatrixColumn {
                band,
                label: dataset.scheme.band_label(band),
                center_hz: b.center_hz,
                lower_hz: b.lower_hz,
                upper_hz: b.upper_hz,
                harmonic_count: b.harmonics.len(),
                integral_limit: dataset.integral_limit(band),
                discrete_limit: dataset.discrete_limit(band),
            }
        })
        .collect();

    let rows = dataset
        .partition
        .ids()
        .map(|region| {
            let cells = bands
                .iter()
                .map(|&band| matrix_cell(dataset, params, region, band, width, shades))
                .collect();
            MatrixRow {
                region: dataset.partition.name(region).to_string(),
                area: dataset.region_area(region),
                height_fraction: dataset.area_fraction(region),
                cells,
            }
        })
        .collect();
    MatrixOverview { mode: params.mode, kind: params.kind, shades, columns, rows }
}

fn matrix_cell<T: Real>(
    dataset: &Dataset<T>,
    params: &MatrixParams<T>,
    region: RegionId,
    band: BandId,
    width: T,
    shades: u8,
) -> MatrixCell<T> {
    let level = dataset.integral_band_level(region, band);
    let limit = dataset.integral_limit(band);
    let acceptance = match level {
        Some(l) => classify(l, limit, width, shades),
        None => Acceptance::UNDEFINED,
    };
    let discrete = dataset.discrete_limit(band);
    let two_tone = || match level {
        Some(l) => two_tone_stripes(l, limit, width, shades),
        None => StripeList::solid(ColorToken::Undefined),
    };
    let strip = || {
        let items = band_items(dataset, region, band);
        ranked_strip(&items, |c| dataset.areas()[c], params.rows, params.reduction)
    };
    let discrete_stripes = || {
        if level.is_none() {
            return StripeList::solid(ColorToken::Undefined);
        }
        ranked_stripes(&strip(), |v| ColorToken::from_acceptance(classify(v, discrete, width, shades)))
    };
    let payload = match params.mode {
        MatrixMode::Limits => CellPayload::Flat { token: ColorToken::from_acceptance(acceptance) },
        MatrixMode::TwoTone => CellPayload::TwoTone { stripes: two_tone() },
        MatrixMode::DiscreteLimits => CellPayload::Ranked { stripes: discrete_stripes() },
        MatrixMode::Combined => CellPayload::Combined { left: two_tone(), right: discrete_stripes() },
        MatrixMode::Raw => {
            let stripes = if level.is_none() {
                StripeList::solid(ColorToken::Undefined)
            } else {
                ranked_stripes(&strip(), |v| map_color(v, &params.scale))
            };
            CellPayload::Raw { stripes }
        }
        MatrixMode::WorstCell => {
            let worst = band_items(dataset, region, band).into_iter().map(|(_, l)| l).reduce(T::max);
            let token = match worst {
                Some(w) => ColorToken::from_acceptance(classify(w, discrete, width, shades)),
                None => ColorToken::Undefined,
            };
            CellPayload::Flat { token }
        }
    };
    MatrixCell {
        level,
        excess: level.zip(limit).map(|(l, lim)| l - lim),
        acceptance,
        payload,
    }
}

/// Category of each (region, band) cell under `mode`: the integral
/// classification for the flat and two-tone modes, the most severe category
/// present for the strip modes.
pub fn category_grid<T: Real>(overview: &MatrixOverview<T>) -> Vec<Vec<AcceptanceCategory>> {
    let worst = |s: &StripeList<T>| {
        s.category_fractions().into_iter().map(|(c, _)| c).filter(|c| *c != AcceptanceCategory::Undefined).max()
    };
    overview
        .rows
        .iter()
        .map(|row| {
            row.cells
                .iter()
                .map(|cell| match (&cell.payload, overview.mode) {
                    (CellPayload::Flat { token }, MatrixMode::WorstCell) => {
                        token.category().unwrap_or(AcceptanceCategory::Undefined)
                    }
                    (CellPayload::Ranked { stripes }, _) | (CellPayload::Combined { right: stripes, .. }, _) => {
                        worst(stripes).unwrap_or(AcceptanceCategory::Undefined)
                    }
                    _ => cell.acceptance.category,
                })
                .collect()
        })
        .collect()
}
