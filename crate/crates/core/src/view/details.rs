//! Band details pane: three ranked level bars, a category-area bar and a
//! numeric summary for one region and band.

use serde::Serialize;

use crate::acoustics::{classify, Acceptance, AcceptanceCategory, DEFAULT_SHADES};
use crate::model::{BandId, CellId, Dataset, RegionId};
use crate::num::Real;

use super::palette::ColorToken;
use super::ranked::{layout_strip, rank_cells, RankedStrip, Reduction, DEFAULT_MATRIX_ROWS};
use super::scale::{map_color, ColorScale, ScaleKind};
use super::stripes::StripeList;
use super::{band_items, layout_id, ViewError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetailsParams<T> {
    pub region: RegionId,
    pub band: BandId,
    /// Bar 3 keeps cells with a band level at or above this value.
    pub abs_threshold: T,
    /// Bar 2 keeps the loudest `top_pct` percent of the region's area.
    pub top_pct: T,
    pub rows: usize,
    pub scale: ColorScale<T>,
    pub shades: u8,
}

impl<T: Real> DetailsParams<T> {
    pub fn new(region: RegionId, band: BandId) -> Self {
        Self {
            region,
            band,
            abs_threshold: T::lit(90.0),
            top_pct: T::lit(10.0),
            rows: DEFAULT_MATRIX_ROWS,
            scale: ColorScale::standard(ScaleKind::Linear),
            shades: DEFAULT_SHADES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetailsBar<T> {
    /// Share of the region's area represented by the bar.
    pub coverage: T,
    pub cell_count: usize,
    pub stripes: StripeList<T>,
    /// Lowest and highest level shown.
    pub level_range: Option<(T, T)>,
    #[serde(skip)]
    pub strip: RankedStrip<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryAreas<T> {
    pub acceptable: T,
    pub borderline: T,
    pub unacceptable: T,
    pub undefined: T,
}

impl<T: Real> CategoryAreas<T> {
    /// Borderline plus Unacceptable share.
    pub fn above_limit(&self) -> T {
        self.borderline + self.unacceptable
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetailsSummary<T> {
    pub area: T,
    pub integral_level: Option<T>,
    pub integral_limit: Option<T>,
    pub discrete_limit: Option<T>,
    /// Integral level minus integral limit.
    pub excess: Option<T>,
    pub acceptance: Acceptance,
    /// Area fractions of the discrete classification.
    pub category_fractions: CategoryAreas<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetailsPane<T> {
    pub region: String,
    pub band: String,
    pub layout_id: String,
    /// All cells, top share by area, cells above the absolute threshold,
    /// category areas.
    pub bars: [DetailsBar<T>; 4],
    pub summary: DetailsSummary<T>,
}

pub fn details_layout_id<T: Real>(dataset: &Dataset<T>, params: &DetailsParams<T>) -> String {
    layout_id(dataset, "details", params)
}

fn level_bar<T: Real>(
    dataset: &Dataset<T>,
    items: &[(CellId, T)],
    region_area: T,
    rows: usize,
    scale: &ColorScale<T>,
) -> DetailsBar<T> {
    let area = |c: CellId| dataset.areas()[c];
    let strip = layout_strip(items, area, rows, Reduction::Max);
    let covered: T = items.iter().map(|&(c, _)| area(c)).sum();
    let stripes = if items.is_empty() {
        StripeList::empty()
    } else {
        StripeList::from_weights(strip.values.iter().rev().filter_map(|v| v.map(|v| (map_color(v, scale), T::one()))))
    };
    DetailsBar {
        coverage: covered / region_area,
        cell_count: items.len(),
        stripes,
        level_range: items.last().zip(items.first()).map(|(lo, hi)| (lo.1, hi.1)),
        strip,
    }
}

pub fn details_pane<T: Real>(dataset: &Dataset<T>, params: &DetailsParams<T>) -> Result<DetailsPane<T>, ViewError> {
    let region = params.region;
    let band = params.band;
    if dataset.region_cells(region).is_empty() {
        return Err(ViewError::EmptyRegion(dataset.partition.name(region).to_string()));
    }
    if !(params.top_pct >= T::zero() && params.top_pct <= T::lit(100.0)) {
        return Err(ViewError::Parameter(format!("top percentage {} outside [0, 100]", params.top_pct)));
    }
    let region_area = dataset.region_area(region);
    let area = |c: CellId| dataset.areas()[c];
    let mut ranked = band_items(dataset, region, band);
    rank_cells(&mut ranked);

    let cutoff = params.top_pct / T::lit(100.0) * region_area;
    let mut start = T::zero();
    let top: Vec<(CellId, T)> = ranked
        .iter()
        .copied()
        .take_while(|&(c, _)| {
            let keep = start < cutoff;
            start = start + area(c);
            keep
        })
        .collect();
    let above: Vec<(CellId, T)> = ranked.iter().copied().filter(|&(_, l)| l >= params.abs_threshold).collect();

    let width = dataset.borderline_width();
    let discrete = dataset.discrete_limit(band);
    let mut shares = [T::zero(); 4];
    for &c in dataset.region_cells(region) {
        let cat = match dataset.cell_band_level(c, band) {
            Some(l) => classify(l, discrete, width, 1).category,
            None => AcceptanceCategory::Undefined,
        };
        let slot = match cat {
            AcceptanceCategory::Acceptable => 0,
            AcceptanceCategory::Borderline => 1,
            AcceptanceCategory::Unacceptable => 2,
            AcceptanceCategory::Undefined => 3,
        };
        shares[slot] = shares[slot] + area(c);
    }
    let fractions = CategoryAreas {
        acceptable: shares[0] / region_area,
        borderline: shares[1] / region_area,
        unacceptable: shares[2] / region_area,
        undefined: shares[3] / region_area,
    };
    let category_bar = DetailsBar {
        coverage: T::one(),
        cell_count: dataset.region_cells(region).len(),
        stripes: StripeList::from_weights([
            (ColorToken::Accept(None), shares[0]),
            (ColorToken::Border(None), shares[1]),
            (ColorToken::Unaccept(None), shares[2]),
            (ColorToken::Undefined, shares[3]),
        ]),
        level_range: ranked.last().zip(ranked.first()).map(|(lo, hi)| (lo.1, hi.1)),
        strip: RankedStrip { order: Vec::new(), values: Vec::new(), contributors: Vec::new() },
    };

    let integral_level = dataset.integral_band_level(region, band);
    let integral_limit = dataset.integral_limit(band);
    let summary = DetailsSummary {
        area: region_area,
        integral_level,
        integral_limit,
        discrete_limit: discrete,
        excess: integral_level.zip(integral_limit).map(|(l, lim)| l - lim),
        acceptance: integral_level.map_or(Acceptance::UNDEFINED, |l| classify(l, integral_limit, width, params.shades)),
        category_fractions: fractions,
    };
    Ok(DetailsPane {
        region: dataset.partition.name(region).to_string(),
        band: dataset.scheme.band_label(band),
        layout_id: details_layout_id(dataset, params),
        bars: [
            level_bar(dataset, &ranked, region_area, params.rows, &params.scale),
            level_bar(dataset, &top, region_area, params.rows, &params.scale),
            level_bar(dataset, &above, region_area, params.rows, &params.scale),
            category_bar,
        ],
        summary,
    })
}
