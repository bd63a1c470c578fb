//! Speed × band matrix of whole-surface integral levels.

use serde::Serialize;
use thiserror::Error;

use crate::model::{BandKind, Dataset, RegionId};
use crate::num::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CampbellError {
    #[error("no datasets given")]
    Empty,
    #[error("dataset {index} uses a different band scheme than dataset 0")]
    SchemeMismatch { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampbellMatrix<T> {
    pub kind: BandKind,
    pub speeds_rpm: Vec<f64>,
    pub labels: Vec<String>,
    /// Nominal band labels, ascending center frequency.
    pub columns: Vec<String>,
    /// `rows[i][j]`: TOTAL integral level of dataset `i` in band `j`.
    pub rows: Vec<Vec<Option<T>>>,
}

pub fn campbell<T: Real>(datasets: &[&Dataset<T>], kind: BandKind) -> Result<CampbellMatrix<T>, CampbellError> {
    let first = datasets.first().ok_or(CampbellError::Empty)?;
    let numbers = |d: &Dataset<T>| d.scheme.bands(kind).iter().map(|b| b.number).collect::<Vec<_>>();
    let reference = numbers(first);
    for (index, d) in datasets.iter().enumerate().skip(1) {
        if numbers(d) != reference {
            return Err(CampbellError::SchemeMismatch { index });
        }
    }
    let rows = datasets
        .iter()
        .map(|d| d.band_ids(kind).into_iter().map(|b| d.integral_band_level(RegionId::TOTAL, b)).collect())
        .collect();
    Ok(CampbellMatrix {
        kind,
        speeds_rpm: datasets.iter().map(|d| d.meta.speed_rpm).collect(),
        labels: datasets.iter().map(|d| d.meta.label.clone()).collect(),
        columns: first.scheme.bands(kind).iter().map(|b| b.label.clone()).collect(),
        rows,
    })
}
