//! Surface vibration analysis: datasets of per-cell harmonic velocity levels
//! on a partitioned surface mesh, band aggregation, acceptance classification
//! against limit curves, view encodings and linked selection.
//!
//! Everything numeric is generic over [`num::Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

pub mod acoustics;
pub mod ingest;
pub mod linking;
pub mod model;
pub mod num;
pub mod report;
pub mod view;

pub use num::Real;

pub type Dataset = model::Dataset<f64>;
pub type Dataset32 = model::Dataset<f32>;
pub type SurfaceMesh = model::SurfaceMesh<f64>;
pub type FrequencyScheme = model::FrequencyScheme<f64>;
pub type SpectrumTable = model::SpectrumTable<f64>;
pub type LimitCurve = model::LimitCurve<f64>;
pub type CampbellMatrix = acoustics::CampbellMatrix<f64>;
pub type MatrixOverview = view::MatrixOverview<f64>;
pub type HarmonicsPane = view::HarmonicsPane<f64>;
pub type DetailsPane = view::DetailsPane<f64>;
pub type ReportDocument = report::ReportDocument<f64>;
pub type HighlightPayload = linking::HighlightPayload<f64>;
