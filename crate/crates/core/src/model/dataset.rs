//! Aggregate root: validated, immutable dataset with derived level caches.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::acoustics::acceptance::discrete_limit;
use crate::acoustics::aggregate::{band_levels, region_integrals};
use crate::num::{Real, DEGENERATE_AREA};

use super::frequency::{BandId, BandKind, FrequencyScheme, HarmonicId};
use super::limits::LimitCurve;
use super::mesh::{Adjacency, CellGeometry, CellId, MeshError, SurfaceMesh};
use super::partition::{PartitionError, RegionId, RegionPartition};
use super::spectrum::{LevelGrid, SpectrumTable};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metadata {
    pub speed_rpm: f64,
    pub label: String,
}

/// Unvalidated dataset components.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetParts<T> {
    pub mesh: SurfaceMesh<T>,
    pub partition: RegionPartition,
    pub scheme: FrequencyScheme<T>,
    pub spectra: SpectrumTable<T>,
    pub limits: LimitCurve<T>,
    pub meta: Metadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    IndexOutOfRange,
    CellArity,
    RepeatedVertex,
    DegenerateCell,
    PartitionOverlap,
    PartitionNotExhaustive,
    PartitionCellOutOfRange,
    RegionName,
    Frequency,
    SpectrumShape,
    NonFiniteLevel,
    Reference,
    Limits,
}

impl ViolationKind {
    /// Violations the dataset can still be analyzed with (offending cells are excluded).
    pub fn is_recoverable(self) -> bool {
        matches!(self, ViolationKind::DegenerateCell)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_usable(&self) -> bool {
        self.violations.iter().all(|v| v.kind.is_recoverable())
    }

    fn push(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation { kind, message: message.into() });
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "violation: {}", v.message)?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Checks every dataset invariant; an empty report means valid.
pub fn validate<T: Real>(parts: &DatasetParts<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let topology = parts.mesh.check_topology();
    for err in &topology {
        let kind = match err {
            MeshError::VertexOutOfRange { .. } => ViolationKind::IndexOutOfRange,
            MeshError::BadArity { .. } => ViolationKind::CellArity,
            MeshError::RepeatedVertex { .. } => ViolationKind::RepeatedVertex,
        };
        report.push(kind, err.to_string());
    }
    if topology.is_empty() {
        if let Ok(geometry) = parts.mesh.cell_geometry() {
            for (cell, g) in geometry.iter().enumerate() {
                if !(g.area.as_f64() > DEGENERATE_AREA) {
                    report.push(
                        ViolationKind::DegenerateCell,
                        format!("cell {cell} is degenerate (area {}); excluded from analysis", g.area),
                    );
                }
            }
        }
        if let Ok(adj) = parts.mesh.build_adjacency() {
            if adj.non_manifold_edges > 0 {
                report.warnings.push(format!("{} non-manifold edge(s)", adj.non_manifold_edges));
            }
        }
    }

    let cells = parts.mesh.cell_count();
    for err in parts.partition.check(cells) {
        let kind = match err {
            PartitionError::CellOutOfRange { .. } => ViolationKind::PartitionCellOutOfRange,
            PartitionError::Overlap { .. } => ViolationKind::PartitionOverlap,
            PartitionError::NotExhaustive { .. } => ViolationKind::PartitionNotExhaustive,
            PartitionError::DuplicateName(_) | PartitionError::BadName(_) => ViolationKind::RegionName,
        };
        report.push(kind, err.to_string());
    }

    for err in FrequencyScheme::check(parts.scheme.fundamental_hz, &parts.scheme.harmonics_hz) {
        report.push(ViolationKind::Frequency, err.to_string());
    }
    let out_of_band = parts.scheme.out_of_band();
    if !out_of_band.is_empty() {
        report
            .warnings
            .push(format!("{} harmonic(s) outside every band (kept in harmonic views)", out_of_band.len()));
    }

    let spectra = &parts.spectra;
    if spectra.cell_count() != cells || spectra.harmonic_count() != parts.scheme.harmonic_count() {
        report.push(
            ViolationKind::SpectrumShape,
            format!(
                "level table is {}x{}, expected {}x{} (cells x harmonics)",
                spectra.cell_count(),
                spectra.harmonic_count(),
                cells,
                parts.scheme.harmonic_count()
            ),
        );
    }
    if let Some((c, h)) = spectra.first_non_finite() {
        report.push(ViolationKind::NonFiniteLevel, format!("non-finite level at cell {c}, harmonic {h}"));
    }
    if !(spectra.reference_velocity > T::zero() && spectra.reference_velocity.is_finite()) {
        report.push(ViolationKind::Reference, format!("reference velocity {} must be positive", spectra.reference_velocity));
    }
    if !(spectra.reference_area > T::zero() && spectra.reference_area.is_finite()) {
        report.push(ViolationKind::Reference, format!("reference area {} must be positive", spectra.reference_area));
    }

    for problem in parts.limits.check() {
        report.push(ViolationKind::Limits, problem);
    }
    let range = parts.scheme.third_range();
    let outside = parts.limits.entries.keys().filter(|k| !range.contains(k)).count();
    if outside > 0 {
        report.warnings.push(format!("{outside} limit(s) for bands outside the frequency scheme"));
    }
    report
}

/// Validated dataset. Immutable after construction; all derived levels are
/// computed once here.
#[derive(Debug, Clone)]
pub struct Dataset<T> {
    pub mesh: SurfaceMesh<T>,
    pub partition: RegionPartition,
    pub scheme: FrequencyScheme<T>,
    pub spectra: SpectrumTable<T>,
    pub limits: LimitCurve<T>,
    pub meta: Metadata,
    geometry: Vec<CellGeometry<T>>,
    areas: Vec<T>,
    adjacency: Adjacency,
    active: Vec<bool>,
    region_of_cell: Vec<RegionId>,
    region_cells: Vec<Vec<CellId>>,
    region_area: Vec<T>,
    third_levels: LevelGrid<T>,
    octave_levels: LevelGrid<T>,
    integral_harmonic: LevelGrid<T>,
    integral_third: LevelGrid<T>,
    integral_octave: LevelGrid<T>,
    report: ValidationReport,
    content_hash: String,
}

impl<T: Real> Dataset<T> {
    /// Validates and derives caches. Degenerate cells are excluded from
    /// analysis and reported; any other violation is an error.
    pub fn new(parts: DatasetParts<T>) -> Result<Self, ValidationReport> {
        let report = validate(&parts);
        if !report.is_usable() {
            return Err(report);
        }
        let DatasetParts { mesh, partition, scheme, spectra, limits, meta } = parts;
        let geometry = mesh.cell_geometry().map_err(|_| report.clone())?;
        let adjacency = mesh.build_adjacency().map_err(|_| report.clone())?;
        let active: Vec<bool> = geometry.iter().map(|g| g.area.as_f64() > DEGENERATE_AREA).collect();
        let areas: Vec<T> = geometry.iter().map(|g| g.area).collect();

        let owners = partition.region_of_cells(mesh.cell_count());
        let region_of_cell: Vec<RegionId> = owners.iter().map(|o| o.unwrap_or(RegionId::TOTAL)).collect();
        let mut region_cells = vec![Vec::new(); partition.row_count()];
        for cell in (0..mesh.cell_count()).filter(|&c| active[c]) {
            region_cells[0].push(cell);
            region_cells[region_of_cell[cell].0].push(cell);
        }
        let region_area: Vec<T> = region_cells.iter().map(|cells| cells.iter().map(|&c| areas[c]).sum()).collect();

        let third_levels = band_levels(&spectra, &scheme, BandKind::ThirdOctave);
        let octave_levels = band_levels(&spectra, &scheme, BandKind::Octave);
        let (a_ref, v0) = (spectra.reference_area, spectra.reference_velocity);
        let integral = |cols: usize, f: &dyn Fn(usize, usize) -> Option<T>| {
            region_integrals(&region_cells, cols, f, &areas, a_ref, v0)
        };
        let fail = |e: crate::acoustics::levels::DomainError| {
            let mut r = report.clone();
            r.push(ViolationKind::Reference, e.to_string());
            r
        };
        let integral_harmonic =
            integral(scheme.harmonic_count(), &|c, h| Some(spectra.level(c, h))).map_err(fail)?;
        let integral_third = integral(third_levels.cols(), &|c, b| third_levels.get(c, b)).map_err(fail)?;
        let integral_octave = integral(octave_levels.cols(), &|c, b| octave_levels.get(c, b)).map_err(fail)?;

        let mut dataset = Self {
            mesh,
            partition,
            scheme,
            spectra,
            limits,
            meta,
            geometry,
            areas,
            adjacency,
            active,
            region_of_cell,
            region_cells,
            region_area,
            third_levels,
            octave_levels,
            integral_harmonic,
            integral_third,
            integral_octave,
            report,
            content_hash: String::new(),
        };
        dataset.content_hash = dataset.compute_hash();
        Ok(dataset)
    }

    fn compute_hash(&self) -> String {
        let mut h = Sha256::new();
        let mut put = |x: f64| h.update(x.to_bits().to_le_bytes());
        put(self.meta.speed_rpm);
        for v in &self.mesh.vertices {
            v.iter().for_each(|c| put(c.as_f64()));
        }
        put(self.scheme.fundamental_hz.as_f64());
        self.scheme.harmonics_hz.iter().for_each(|f| put(f.as_f64()));
        self.spectra.values().iter().for_each(|l| put(l.as_f64()));
        put(self.spectra.reference_velocity.as_f64());
        put(self.spectra.reference_area.as_f64());
        put(self.limits.borderline_width_db.as_f64());
        for (k, l) in &self.limits.entries {
            put(*k as f64);
            put(l.as_f64());
        }
        for cell in &self.mesh.cells {
            h.update((cell.len() as u64).to_le_bytes());
            cell.iter().for_each(|&v| h.update((v as u64).to_le_bytes()));
        }
        for r in &self.partition.regions {
            h.update(r.name.as_bytes());
            h.update([0]);
            r.cells.iter().for_each(|&c| h.update((c as u64).to_le_bytes()));
        }
        h.update(self.meta.label.as_bytes());
        let range = self.scheme.third_range();
        h.update(range.start().to_le_bytes());
        h.update(range.end().to_le_bytes());
        hex::encode(h.finalize())
    }

    /// SHA-256 over all content; changes whenever any level, cell or limit does.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn cell_count(&self) -> usize {
        self.mesh.cell_count()
    }

    pub fn geometry(&self) -> &[CellGeometry<T>] {
        &self.geometry
    }

    pub fn areas(&self) -> &[T] {
        &self.areas
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    /// False for degenerate cells excluded from analysis.
    pub fn is_active(&self, cell: CellId) -> bool {
        self.active[cell]
    }

    pub fn region_of(&self, cell: CellId) -> RegionId {
        self.region_of_cell[cell]
    }

    /// Active cells of a region, ascending.
    pub fn region_cells(&self, region: RegionId) -> &[CellId] {
        &self.region_cells[region.0]
    }

    pub fn region_area(&self, region: RegionId) -> T {
        self.region_area[region.0]
    }

    pub fn total_area(&self) -> T {
        self.region_area[0]
    }

    /// Region area divided by TOTAL area.
    pub fn area_fraction(&self, region: RegionId) -> T {
        self.region_area[region.0] / self.total_area()
    }

    pub fn band_table(&self, kind: BandKind) -> &LevelGrid<T> {
        match kind {
            BandKind::ThirdOctave => &self.third_levels,
            BandKind::Octave => &self.octave_levels,
        }
    }

    /// Band level of a cell, `None` when the band holds no harmonics.
    pub fn cell_band_level(&self, cell: CellId, band: BandId) -> Option<T> {
        self.band_table(band.kind).get(cell, band.pos)
    }

    pub fn cell_harmonic_level(&self, cell: CellId, h: HarmonicId) -> T {
        self.spectra.level(cell, h)
    }

    pub fn integral_band_level(&self, region: RegionId, band: BandId) -> Option<T> {
        match band.kind {
            BandKind::ThirdOctave => self.integral_third.get(region.0, band.pos),
            BandKind::Octave => self.integral_octave.get(region.0, band.pos),
        }
    }

    pub fn integral_harmonic_level(&self, region: RegionId, h: HarmonicId) -> Option<T> {
        self.integral_harmonic.get(region.0, h)
    }

    pub fn integral_limit(&self, band: BandId) -> Option<T> {
        self.limits.integral_limit(&self.scheme, band)
    }

    /// Integral limit normalized to the reference area over the TOTAL surface.
    pub fn discrete_limit(&self, band: BandId) -> Option<T> {
        self.integral_limit(band)
            .map(|l| discrete_limit(l, self.total_area(), self.spectra.reference_area))
    }

    pub fn borderline_width(&self) -> T {
        self.limits.borderline_width_db
    }

    /// Integral level minus integral limit.
    pub fn excess(&self, region: RegionId, band: BandId) -> Option<T> {
        Some(self.integral_band_level(region, band)? - self.integral_limit(band)?)
    }

    pub fn band_ids(&self, kind: BandKind) -> Vec<BandId> {
        self.scheme.band_ids(kind).collect()
    }
}
