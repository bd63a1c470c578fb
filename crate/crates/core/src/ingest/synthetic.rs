//! Deterministic synthetic datasets on a subdivided box.
//!
//! The six box faces form the regions FRONT (+x), REAR (−x), TOP (+z),
//! BOTTOM (−z), LEFT (+y) and RIGHT (−y). Every cell gets `base_level_db` for
//! every harmonic; hotspots raise the harmonics of chosen bands on a plateau of
//! cells around a face center; uniform noise is added last.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::frequency::third_number_for_nominal;
use crate::model::{
    Dataset, DatasetParts, FrequencyScheme, LimitCurve, Metadata, Region, RegionPartition, SpectrumTable,
    SurfaceMesh,
};
use crate::num::{round_sig9, Real};

use super::formats::IngestError;

pub const SIDES: [&str; 6] = ["FRONT", "REAR", "TOP", "BOTTOM", "LEFT", "RIGHT"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub seed: u64,
    /// Cells per box edge; each face has `resolution²` quads.
    pub resolution: usize,
    pub box_size_m: [f64; 3],
    pub speed_rpm: f64,
    /// Harmonic spacing in engine orders (0.5 = half orders).
    pub order_step: f64,
    pub max_frequency_hz: f64,
    /// Nominal centers of the first and last one-third octave band.
    pub bands_hz: [f64; 2],
    /// Per-harmonic level of every cell before hotspots and noise.
    pub base_level_db: f64,
    /// Half-width of the uniform noise added to every level.
    pub noise_db: f64,
    pub hotspots: Vec<HotspotSpec>,
    pub limits: SyntheticLimits,
    pub reference_velocity: f64,
    pub reference_area: f64,
    pub borderline_width_db: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotspotSpec {
    pub region: String,
    /// Nominal centers of the first and last affected one-third octave band.
    pub bands_hz: [f64; 2],
    /// Per-harmonic level on the plateau.
    pub peak_db: f64,
    /// Fraction of the region's area covered by the plateau.
    pub coverage: f64,
    /// e-folding distance of the decay outside the plateau; 0 gives a sharp edge.
    #[serde(default)]
    pub falloff_m: f64,
}

/// Limits expressed as headroom over the uniform base field.
///
/// A band's integral limit is the integral level of the noise-free base field
/// plus the headroom, so the base field sits `headroom_db` below the discrete
/// limit everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticLimits {
    /// Nominal band range carrying limits.
    pub range_hz: [f64; 2],
    pub headroom_db: f64,
}

impl Default for SyntheticLimits {
    fn default() -> Self {
        Self { range_hz: [250.0, 3150.0], headroom_db: 10.0 }
    }
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            seed: 1,
            resolution: 8,
            box_size_m: [0.6, 0.5, 0.4],
            speed_rpm: 2000.0,
            order_step: 0.5,
            max_frequency_hz: 4000.0,
            bands_hz: [12.5, 4000.0],
            base_level_db: 70.0,
            noise_db: 0.0,
            hotspots: Vec::new(),
            limits: SyntheticLimits::default(),
            reference_velocity: 5e-8,
            reference_area: 1.0,
            borderline_width_db: 6.0,
            label: "synthetic".into(),
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SyntheticError {
    #[error("resolution must be at least 2, got {0}")]
    Resolution(usize),
    #[error("hotspot peak {peak} dB is below the base level {base} dB")]
    PeakBelowBase { peak: f64, base: f64 },
    #[error("unknown hotspot region {0:?}")]
    UnknownRegion(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// Box surface mesh with shared vertices plus its six-side partition.
pub fn box_mesh(resolution: usize, size: [f64; 3]) -> (SurfaceMesh<f64>, RegionPartition) {
    let n = resolution;
    let mut index: HashMap<[usize; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut vertex = |p: [usize; 3]| -> usize {
        *index.entry(p).or_insert_with(|| {
            vertices.push([
                size[0] * p[0] as f64 / n as f64,
                size[1] * p[1] as f64 / n as f64,
                size[2] * p[2] as f64 / n as f64,
            ]);
            vertices.len() - 1
        })
    };
    // (name, fixed axis, at max, in-plane axes ordered so u × w points outward)
    let faces: [(&str, usize, bool, usize, usize); 6] = [
        ("FRONT", 0, true, 1, 2),
        ("REAR", 0, false, 2, 1),
        ("TOP", 2, true, 0, 1),
        ("BOTTOM", 2, false, 1, 0),
        ("LEFT", 1, true, 2, 0),
        ("RIGHT", 1, false, 0, 2),
    ];
    let mut cells = Vec::new();
    let mut regions = Vec::new();
    for (name, axis, at_max, u, w) in faces {
        let mut ids = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let corner = |du: usize, dw: usize| {
                    let mut p = [0; 3];
                    p[axis] = if at_max { n } else { 0 };
                    p[u] = i + du;
                    p[w] = j + dw;
                    p
                };
                let quad = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)].map(&mut vertex);
                ids.push(cells.len());
                cells.push(quad.to_vec());
            }
        }
        regions.push(Region { name: name.to_string(), cells: ids });
    }
    (SurfaceMesh::new(vertices, cells), RegionPartition::new(regions))
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Plateau cells of a hotspot: the region's cells closest to the region's
/// area-weighted center, taken in distance order (ties by id) until their
/// area reaches `coverage` of the region. Returns `(cell, distance)` for all
/// region cells in that order and the plateau length.
pub fn plateau(
    region_cells: &[usize],
    areas: &[f64],
    centroids: &[[f64; 3]],
    coverage: f64,
) -> (Vec<(usize, f64)>, usize) {
    let total: f64 = region_cells.iter().map(|&c| areas[c]).sum();
    let mut center = [0.0; 3];
    for &c in region_cells {
        for k in 0..3 {
            center[k] += areas[c] * centroids[c][k] / total;
        }
    }
    let mut ordered: Vec<(usize, f64)> = region_cells.iter().map(|&c| (c, distance(centroids[c], center))).collect();
    ordered.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let target = coverage * total;
    let mut covered = 0.0;
    let mut len = 0;
    for &(c, _) in &ordered {
        // relative slack absorbs rounding in the running sum
        if covered >= target * (1.0 - 1e-9) {
            break;
        }
        covered += areas[c];
        len += 1;
    }
    (ordered, len)
}

impl SyntheticSpec {
    pub fn check(&self) -> Result<(), SyntheticError> {
        if self.resolution < 2 {
            return Err(SyntheticError::Resolution(self.resolution));
        }
        for h in &self.hotspots {
            if h.peak_db < self.base_level_db {
                return Err(SyntheticError::PeakBelowBase { peak: h.peak_db, base: self.base_level_db });
            }
            if !SIDES.contains(&h.region.as_str()) {
                return Err(SyntheticError::UnknownRegion(h.region.clone()));
            }
            if !(0.0..=1.0).contains(&h.coverage) || h.falloff_m < 0.0 {
                return Err(SyntheticError::Parameter(format!("hotspot on {} has invalid coverage/falloff", h.region)));
            }
        }
        let positive = [self.speed_rpm, self.order_step, self.max_frequency_hz, self.reference_velocity, self.reference_area];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || self.box_size_m.iter().any(|v| !(*v > 0.0)) {
            return Err(SyntheticError::Parameter("sizes, speed and references must be positive".into()));
        }
        if !(self.noise_db >= 0.0) || !(self.borderline_width_db > 0.0) {
            return Err(SyntheticError::Parameter("noise must be >= 0 and borderline width > 0".into()));
        }
        for hz in self.bands_hz.iter().chain(&self.limits.range_hz) {
            if third_number_for_nominal(*hz).is_none() {
                return Err(SyntheticError::Parameter(format!("{hz} Hz is not a one-third octave center")));
            }
        }
        Ok(())
    }

    pub fn harmonic_frequencies(&self) -> Vec<f64> {
        let step = self.speed_rpm / 60.0 * self.order_step;
        (1..).map(|j| j as f64 * step).take_while(|&f| f <= self.max_frequency_hz).collect()
    }

    /// Demo dataset: the analysis scenario at a moderate resolution.
    pub fn demo() -> Self {
        let mut spec = Self::scenario(12, &[(500.0, 5.4), (630.0, 5.7)], 0.6);
        spec.label = "demo".into();
        spec
    }

    /// Hotspots on BOTTOM in the given bands, sized so the TOTAL integral level
    /// exceeds each band's integral limit by the requested excess, with the
    /// plateau covering `coverage` of BOTTOM's area.
    pub fn scenario(resolution: usize, excesses: &[(f64, f64)], coverage: f64) -> Self {
        let mut spec = Self {
            seed: 2000,
            resolution,
            noise_db: 0.5,
            label: format!("scenario-{resolution}"),
            ..Self::default()
        };
        let (mesh, partition) = box_mesh(resolution, spec.box_size_m);
        let geometry = mesh.cell_geometry().expect("box mesh is valid");
        let areas: Vec<f64> = geometry.iter().map(|g| g.area).collect();
        let centroids: Vec<[f64; 3]> = geometry.iter().map(|g| g.centroid).collect();
        let bottom = partition.regions.iter().find(|r| r.name == "BOTTOM").expect("box has BOTTOM");
        let (ordered, len) = plateau(&bottom.cells, &areas, &centroids, coverage);
        let hot_area: f64 = ordered[..len].iter().map(|&(c, _)| areas[c]).sum();
        let total_area: f64 = areas.iter().sum();

        // energy mean of uniform noise in [-a, a] dB
        let a = spec.noise_db;
        let gain = if a > 0.0 {
            let k = std::f64::consts::LN_10 / 10.0;
            ((k * a).exp() - (-k * a).exp()) / (2.0 * k * a)
        } else {
            1.0
        };
        let base_rel = 10f64.powf(-spec.limits.headroom_db / 10.0);
        for &(band, excess) in excesses {
            let target = 10f64.powf(excess / 10.0) / gain * total_area;
            let hot_rel = (target - (total_area - hot_area) * base_rel) / hot_area;
            let peak = spec.base_level_db + spec.limits.headroom_db + 10.0 * hot_rel.log10();
            spec.hotspots.push(HotspotSpec {
                region: "BOTTOM".into(),
                bands_hz: [band, band],
                peak_db: peak,
                coverage,
                falloff_m: 0.0,
            });
        }
        spec
    }
}

/// Builds the dataset described by `spec`; a pure function of `spec`.
pub fn generate_synthetic<T: Real>(spec: &SyntheticSpec) -> Result<Dataset<T>, IngestError> {
    spec.check()?;
    let (mesh, partition) = box_mesh(spec.resolution, spec.box_size_m);
    let geometry = mesh.cell_geometry().expect("box mesh is valid");
    let areas: Vec<f64> = geometry.iter().map(|g| g.area).collect();
    let centroids: Vec<[f64; 3]> = geometry.iter().map(|g| g.centroid).collect();
    let harmonics = spec.harmonic_frequencies();
    let scheme = FrequencyScheme::<f64>::with_nominal_range(spec.speed_rpm / 60.0, harmonics, spec.bands_hz[0], spec.bands_hz[1])?;
    let cells = mesh.cell_count();
    let nh = scheme.harmonic_count();
    let mut levels = vec![spec.base_level_db; cells * nh];

    for hot in &spec.hotspots {
        let region = partition.regions.iter().find(|r| r.name == hot.region).expect("checked region");
        let (ordered, len) = plateau(&region.cells, &areas, &centroids, hot.coverage);
        let edge = ordered.get(len.saturating_sub(1)).map_or(0.0, |&(_, d)| d);
        let lo = third_number_for_nominal(hot.bands_hz[0]).expect("checked band");
        let hi = third_number_for_nominal(hot.bands_hz[1]).expect("checked band");
        let affected: Vec<usize> = (0..nh)
            .filter(|&h| {
                scheme
                    .third_of_harmonic(h)
                    .map(|pos| (lo..=hi).contains(&scheme.bands(crate::model::BandKind::ThirdOctave)[pos].number))
                    .unwrap_or(false)
            })
            .collect();
        for (rank, &(cell, d)) in ordered.iter().enumerate() {
            let level = if rank < len {
                hot.peak_db
            } else if hot.falloff_m > 0.0 {
                spec.base_level_db + (hot.peak_db - spec.base_level_db) * (-(d - edge) / hot.falloff_m).exp()
            } else {
                continue;
            };
            for &h in &affected {
                let slot = &mut levels[cell * nh + h];
                *slot = slot.max(level);
            }
        }
    }

    if spec.noise_db > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for l in levels.iter_mut() {
            *l += rng.random_range(-spec.noise_db..=spec.noise_db);
        }
    }
    for l in levels.iter_mut() {
        *l = round_sig9(*l);
    }

    // integral limit = noise-free uniform base integral + headroom
    let total_area: f64 = areas.iter().sum();
    let lo = third_number_for_nominal(spec.limits.range_hz[0]).expect("checked band");
    let hi = third_number_for_nominal(spec.limits.range_hz[1]).expect("checked band");
    let mut entries = BTreeMap::new();
    for band in scheme.bands(crate::model::BandKind::ThirdOctave) {
        if !(lo..=hi).contains(&band.number) || band.harmonics.is_empty() {
            continue;
        }
        let base_band = spec.base_level_db + 10.0 * (band.harmonics.len() as f64).log10();
        let uniform_integral = base_band + 10.0 * (total_area / spec.reference_area).log10();
        entries.insert(band.number, round_sig9(uniform_integral + spec.limits.headroom_db));
    }

    let mesh = SurfaceMesh::new(mesh.vertices.iter().map(|v| v.map(T::lit)).collect(), mesh.cells);
    let scheme = FrequencyScheme::new(
        T::lit(scheme.fundamental_hz),
        scheme.harmonics_hz.iter().map(|&f| T::lit(f)).collect(),
        scheme.third_range(),
    )?;
    let levels = levels.into_iter().map(T::lit).collect();
    let spectra = SpectrumTable::new(levels, cells, nh, T::lit(spec.reference_velocity), T::lit(spec.reference_area))
        .expect("table shape matches by construction");
    let entries = entries.into_iter().map(|(k, v)| (k, T::lit(v))).collect();
    let parts = DatasetParts {
        mesh,
        partition,
        scheme,
        spectra,
        limits: LimitCurve::new(entries, T::lit(spec.borderline_width_db)),
        meta: Metadata { speed_rpm: spec.speed_rpm, label: spec.label.clone() },
    };
    Dataset::new(parts).map_err(IngestError::Invalid)
}
