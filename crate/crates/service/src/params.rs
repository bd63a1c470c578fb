//! Query-string parsing into engine parameters.
//!
//! Every query field is read as text and converted here so that malformed
//! values surface as 422 responses with a message naming the field.

use std::str::FromStr;

use nvh_core::acoustics::MAX_SHADES;
use nvh_core::model::{BandId, BandKind, HarmonicId, RegionId};
use nvh_core::view::{ColorScale, DetailsParams, HarmonicsParams, MatrixMode, MatrixParams, PaneBand, ScaleKind, SortMode};
use nvh_core::Dataset;
use serde::Deserialize;

use crate::error::ApiError;

/// Upper bound on requested strip rows.
pub const MAX_ROWS: usize = 8192;

pub fn parse<V: FromStr>(field: &str, raw: Option<&str>) -> Result<Option<V>, ApiError> {
    raw.map(|s| s.trim().parse::<V>().map_err(|_| ApiError::invalid(format!("invalid value {s:?} for {field}"))))
        .transpose()
}

fn rows(field: &str, raw: Option<&str>, default: usize) -> Result<usize, ApiError> {
    let n = parse(field, raw)?.unwrap_or(default);
    if n == 0 || n > MAX_ROWS {
        return Err(ApiError::invalid(format!("{field} must be between 1 and {MAX_ROWS}")));
    }
    Ok(n)
}

fn shades(raw: Option<&str>, default: u8) -> Result<u8, ApiError> {
    let s = parse("shades", raw)?.unwrap_or(default);
    if s == 0 || s > MAX_SHADES {
        return Err(ApiError::invalid(format!("shades must be between 1 and {MAX_SHADES}")));
    }
    Ok(s)
}

fn scale(raw: Option<&str>) -> Result<ColorScale<f64>, ApiError> {
    let kind = match raw {
        Some(s) => s.parse::<ScaleKind>()?,
        None => ScaleKind::Linear,
    };
    Ok(ColorScale::standard(kind))
}

pub fn kind(raw: Option<&str>) -> Result<BandKind, ApiError> {
    match raw.unwrap_or("third") {
        "third" | "third-octave" => Ok(BandKind::ThirdOctave),
        "octave" => Ok(BandKind::Octave),
        other => Err(ApiError::invalid(format!("unknown band kind {other:?} (expected third or octave)"))),
    }
}

pub fn region(dataset: &Dataset, raw: Option<&str>) -> Result<RegionId, ApiError> {
    let name = raw.unwrap_or(nvh_core::model::TOTAL);
    dataset.partition.find(name).ok_or_else(|| ApiError::not_found(format!("unknown region {name:?}")))
}

pub fn band(dataset: &Dataset, raw: Option<&str>) -> Result<BandId, ApiError> {
    let label = raw.ok_or_else(|| ApiError::invalid("missing band"))?;
    dataset.scheme.band_by_label(label).ok_or_else(|| ApiError::not_found(format!("unknown band {label:?}")))
}

pub fn harmonic(dataset: &Dataset, field: &str, raw: Option<&str>) -> Result<Option<HarmonicId>, ApiError> {
    let h: Option<HarmonicId> = parse(field, raw)?;
    match h {
        Some(h) if h >= dataset.scheme.harmonic_count() => Err(ApiError::not_found(format!("unknown harmonic {h}"))),
        other => Ok(other),
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct MatrixQuery {
    pub mode: Option<String>,
    pub shades: Option<String>,
    pub rows: Option<String>,
    pub kind: Option<String>,
    pub scale: Option<String>,
}

impl MatrixQuery {
    pub fn params(&self) -> Result<MatrixParams<f64>, ApiError> {
        let d = MatrixParams::<f64>::default();
        Ok(MatrixParams {
            mode: self.mode.as_deref().map(MatrixMode::from_str).transpose()?.unwrap_or(d.mode),
            kind: kind(self.kind.as_deref())?,
            shades: shades(self.shades.as_deref(), d.shades)?,
            rows: rows("rows", self.rows.as_deref(), d.rows)?,
            scale: scale(self.scale.as_deref())?,
            reduction: d.reduction,
        })
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct HarmonicsQuery {
    pub region: Option<String>,
    pub band: Option<String>,
    pub rows: Option<String>,
    pub sort: Option<String>,
    pub anchor: Option<String>,
    pub scale: Option<String>,
}

impl HarmonicsQuery {
    pub fn params(&self, dataset: &Dataset) -> Result<HarmonicsParams<f64>, ApiError> {
        let region = region(dataset, self.region.as_deref())?;
        let label = self.band.as_deref().ok_or_else(|| ApiError::invalid("missing band"))?;
        let band = PaneBand::parse(dataset, label).ok_or_else(|| ApiError::not_found(format!("unknown band {label:?}")))?;
        let mut p = HarmonicsParams::new(region, band);
        p.rows = rows("rows", self.rows.as_deref(), p.rows)?;
        p.sort = self.sort.as_deref().map(SortMode::from_str).transpose()?.unwrap_or(p.sort);
        p.anchor = harmonic(dataset, "anchor", self.anchor.as_deref())?;
        p.scale = scale(self.scale.as_deref())?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct DetailsQuery {
    pub region: Option<String>,
    pub band: Option<String>,
    pub abs: Option<String>,
    pub pct: Option<String>,
    pub rows: Option<String>,
    pub shades: Option<String>,
    pub scale: Option<String>,
}

impl DetailsQuery {
    pub fn params(&self, dataset: &Dataset) -> Result<DetailsParams<f64>, ApiError> {
        let mut p = DetailsParams::new(region(dataset, self.region.as_deref())?, band(dataset, self.band.as_deref())?);
        if let Some(abs) = parse::<f64>("abs", self.abs.as_deref())? {
            if !abs.is_finite() {
                return Err(ApiError::invalid("abs must be finite"));
            }
            p.abs_threshold = abs;
        }
        if let Some(pct) = parse::<f64>("pct", self.pct.as_deref())? {
            if !(pct > 0.0 && pct <= 100.0) {
                return Err(ApiError::invalid("pct must be in (0, 100]"));
            }
            p.top_pct = pct;
        }
        p.rows = rows("rows", self.rows.as_deref(), p.rows)?;
        p.shades = shades(self.shades.as_deref(), p.shades)?;
        p.scale = scale(self.scale.as_deref())?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct BoxplotQuery {
    pub bands: Option<String>,
    pub regions: Option<String>,
    pub split: Option<String>,
    pub bins: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct ColorsQuery {
    pub band: Option<String>,
    pub harmonic: Option<String>,
    pub scale: Option<String>,
    pub shades: Option<String>,
}

/// Coloring requested from `/colors`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColorMode {
    Limits { shades: u8 },
    Scale(ColorScale<f64>),
}

impl ColorsQuery {
    pub fn mode(&self, harmonic: bool) -> Result<ColorMode, ApiError> {
        match self.scale.as_deref() {
            Some("limits") if harmonic => Err(ApiError::invalid("harmonics have no limits; use a linear or nonlinear scale")),
            None if !harmonic => Ok(ColorMode::Limits { shades: shades(self.shades.as_deref(), 1)? }),
            Some("limits") => Ok(ColorMode::Limits { shades: shades(self.shades.as_deref(), 1)? }),
            other => Ok(ColorMode::Scale(scale(other)?)),
        }
    }
}

pub fn list(raw: Option<&str>) -> Vec<&str> {
    raw.map(|s| s.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()).unwrap_or_default()
}
