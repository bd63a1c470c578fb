//! Area-weighted boxplots of discrete band levels.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::acoustics::AcceptanceCategory;
use crate::model::{BandId, CellId, Dataset, RegionId};
use crate::num::Real;

use super::ViewError;

/// Smallest level whose cumulative weight reaches `q` of the total weight.
///
/// `items` are `(level, weight)` pairs in any order; returns `None` when
/// empty or when the total weight is not positive.
pub fn weighted_quantile<T: Real>(items: &[(T, T)], q: T) -> Option<T> {
    let mut sorted = items.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    quantile_sorted(&sorted, q)
}

fn quantile_sorted<T: Real>(sorted: &[(T, T)], q: T) -> Option<T> {
    let total: T = sorted.iter().map(|&(_, w)| w).sum();
    if sorted.is_empty() || !(total > T::zero()) {
        return None;
    }
    let target = q * total;
    let mut cumulative = T::zero();
    for &(level, w) in sorted {
        cumulative = cumulative + w;
        if cumulative >= target {
            return Some(level);
        }
    }
    sorted.last().map(|&(l, _)| l)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram<T> {
    /// `bins + 1` ascending edges spanning the level range.
    pub edges: Vec<T>,
    pub counts: Vec<usize>,
    /// Area share per bin.
    pub area_fractions: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxSummary<T> {
    pub min: T,
    pub q1: T,
    pub median: T,
    pub q3: T,
    pub max: T,
    /// Most extreme levels within 1.5 IQR of the box.
    pub whisker_low: T,
    pub whisker_high: T,
    pub outliers: usize,
    pub histogram: Histogram<T>,
}

/// dB interval of one acceptance category; `None` bounds are open.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitStripe<T> {
    pub category: AcceptanceCategory,
    pub low: Option<T>,
    pub high: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxStats<T> {
    pub band: String,
    /// `None` for a box over the union of the requested regions.
    pub region: Option<String>,
    pub cell_count: usize,
    pub area: T,
    pub stats: Option<BoxSummary<T>>,
    pub limit_stripes: Vec<LimitStripe<T>>,
}

/// Summary of `(level, area)` pairs.
pub fn box_summary<T: Real>(items: &[(T, T)], bins: usize) -> Option<BoxSummary<T>> {
    let mut sorted = items.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let q = |p: f64| quantile_sorted(&sorted, T::lit(p));
    let (q1, median, q3) = (q(0.25)?, q(0.5)?, q(0.75)?);
    let min = sorted.first()?.0;
    let max = sorted.last()?.0;
    let reach = T::lit(1.5) * (q3 - q1);
    let (fence_lo, fence_hi) = (q1 - reach, q3 + reach);
    let inside = sorted.iter().map(|&(l, _)| l).filter(|&l| l >= fence_lo && l <= fence_hi);
    let whisker_low = inside.clone().next().unwrap_or(q1);
    let whisker_high = inside.last().unwrap_or(q3);
    let outliers = sorted.iter().filter(|&&(l, _)| l < fence_lo || l > fence_hi).count();

    let bins = bins.max(1);
    let span = max - min;
    let nb = T::from_usize_lossy(bins);
    let edges = (0..=bins).map(|i| min + span * T::from_usize_lossy(i) / nb).collect();
    let mut counts = vec![0usize; bins];
    let mut areas = vec![T::zero(); bins];
    let total: T = sorted.iter().map(|&(_, w)| w).sum();
    for &(l, w) in &sorted {
        let idx = if span > T::zero() { ((l - min) / span * nb).floor().to_usize().unwrap_or(0).min(bins - 1) } else { 0 };
        counts[idx] += 1;
        areas[idx] = areas[idx] + w;
    }
    Some(BoxSummary {
        min,
        q1,
        median,
        q3,
        max,
        whisker_low,
        whisker_high,
        outliers,
        histogram: Histogram { edges, counts, area_fractions: areas.into_iter().map(|a| a / total).collect() },
    })
}

fn limit_stripes<T: Real>(dataset: &Dataset<T>, band: BandId) -> Vec<LimitStripe<T>> {
    let Some(limit) = dataset.discrete_limit(band) else {
        return Vec::new();
    };
    let w = dataset.borderline_width();
    vec![
        LimitStripe { category: AcceptanceCategory::Acceptable, low: None, high: Some(limit) },
        LimitStripe { category: AcceptanceCategory::Borderline, low: Some(limit), high: Some(limit + w) },
        LimitStripe { category: AcceptanceCategory::Unacceptable, low: Some(limit + w), high: None },
    ]
}

/// One box per band (over the union of `regions`) or, with `split`, one per
/// band and region. An empty region list means TOTAL.
pub fn boxplot_stats<T: Real>(
    dataset: &Dataset<T>,
    bands: &[BandId],
    regions: &[RegionId],
    split: bool,
    bins: usize,
) -> Result<Vec<BoxStats<T>>, ViewError> {
    if bins == 0 {
        return Err(ViewError::Parameter("bins must be at least 1".into()));
    }
    let regions = if regions.is_empty() { vec![RegionId::TOTAL] } else { regions.to_vec() };
    let groups: Vec<(Option<String>, Vec<CellId>)> = if split {
        regions
            .iter()
            .map(|&r| (Some(dataset.partition.name(r).to_string()), dataset.region_cells(r).to_vec()))
            .collect()
    } else {
        let union: BTreeSet<CellId> = regions.iter().flat_map(|&r| dataset.region_cells(r).iter().copied()).collect();
        vec![(None, union.into_iter().collect())]
    };
    let mut out = Vec::new();
    for &band in bands {
        for (name, cells) in &groups {
            let items: Vec<(T, T)> = cells
                .iter()
                .filter_map(|&c| dataset.cell_band_level(c, band).map(|l| (l, dataset.areas()[c])))
                .collect();
            out.push(BoxStats {
                band: dataset.scheme.band_label(band),
                region: name.clone(),
                cell_count: items.len(),
                area: items.iter().map(|&(_, a)| a).sum(),
                stats: box_summary(&items, bins),
                limit_stripes: limit_stripes(dataset, band),
            });
        }
    }
    Ok(out)
}
