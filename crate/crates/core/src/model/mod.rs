//! Domain types: mesh, regions, frequency scheme, spectra, limits, dataset.

pub mod dataset;
pub mod frequency;
pub mod limits;
pub mod mesh;
pub mod partition;
pub mod spectrum;

pub use dataset::{validate, Dataset, DatasetParts, Metadata, ValidationReport, Violation, ViolationKind};
pub use frequency::{Band, BandId, BandKind, FrequencyScheme, HarmonicId};
pub use limits::LimitCurve;
pub use mesh::{Adjacency, CellGeometry, CellId, SurfaceMesh};
pub use partition::{Region, RegionId, RegionPartition, TOTAL};
pub use spectrum::{LevelGrid, SpectrumTable};
