//! Reading and writing datasets, plus deterministic synthetic generation.

pub mod formats;
pub mod synthetic;

pub use formats::{load, load_parts, read_manifest, save, DatasetManifest, IngestError, SavedDataset};
pub use synthetic::{generate_synthetic, HotspotSpec, SyntheticError, SyntheticLimits, SyntheticSpec};
