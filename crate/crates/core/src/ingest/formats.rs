//! Text file formats: JSON manifest, mesh (`v`/`f` lines), and CSV tables for
//! regions, harmonic levels and limits.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::frequency::{nominal_third, third_number_for_nominal, SchemeError};
use crate::model::limits::DEFAULT_BORDERLINE_WIDTH_DB;
use crate::model::{
    Dataset, DatasetParts, FrequencyScheme, LimitCurve, Metadata, RegionPartition, SpectrumTable,
    SurfaceMesh, ValidationReport,
};
use crate::num::{format_sig9, Real};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}{}: {message}", file.display(), column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse { file: PathBuf, line: u64, column: Option<usize>, message: String },
    #[error("{}: {message}", file.display())]
    CountMismatch { file: PathBuf, message: String },
    #[error("{}:{line}: unknown region name {name:?}", file.display())]
    UnknownRegion { file: PathBuf, line: u64, name: String },
    #[error("{}: {source}", path.display())]
    Manifest { path: PathBuf, source: serde_json::Error },
    #[error("frequency scheme: {0}")]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Synthetic(#[from] super::synthetic::SyntheticError),
    #[error("dataset is invalid:\n{0}")]
    Invalid(ValidationReport),
}

pub type Result<T, E = IngestError> = std::result::Result<T, E>;

/// Dataset description; file paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub mesh: PathBuf,
    pub regions: PathBuf,
    pub levels: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<PathBuf>,
    pub speed_rpm: f64,
    pub reference_velocity: f64,
    #[serde(default = "one")]
    pub reference_area: f64,
    #[serde(default)]
    pub label: String,
    #[serde(default = "default_width")]
    pub borderline_width_db: f64,
    /// Nominal centers of the first and last one-third octave band.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bands_hz: Option<[f64; 2]>,
    /// Region row order; when given, the regions file may use only these names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_order: Option<Vec<String>>,
}

fn one() -> f64 {
    1.0
}

fn default_width() -> f64 {
    DEFAULT_BORDERLINE_WIDTH_DB
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError + '_ {
    move |source| IngestError::Io { path: path.to_path_buf(), source }
}

fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    fs::File::open(path).and_then(|mut f| f.read_to_string(&mut s)).map_err(io_err(path))?;
    Ok(s)
}

fn parse_err(file: &Path, line: u64, column: Option<usize>, message: impl Into<String>) -> IngestError {
    IngestError::Parse { file: file.to_path_buf(), line, column, message: message.into() }
}

pub fn read_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| IngestError::Manifest { path: path.to_path_buf(), source })
}

/// Parses `v x y z` and `f i j k [l]` lines. `#` starts a comment.
pub fn read_mesh<T: Real>(path: &Path) -> Result<SurfaceMesh<T>> {
    let text = read_to_string(path)?;
    let mut vertices = Vec::new();
    let mut cells = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let tag = tokens.next().unwrap_or_default();
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "v" => {
                if rest.len() != 3 {
                    return Err(parse_err(path, line_no, None, format!("vertex needs 3 coordinates, got {}", rest.len())));
                }
                let mut p = [T::zero(); 3];
                for (k, tok) in rest.iter().enumerate() {
                    let x: f64 = tok
                        .parse()
                        .map_err(|_| parse_err(path, line_no, Some(k + 2), format!("invalid coordinate {tok:?}")))?;
                    p[k] = T::lit(x);
                }
                vertices.push(p);
            }
            "f" => {
                if !(3..=4).contains(&rest.len()) {
                    return Err(parse_err(path, line_no, None, format!("face needs 3 or 4 indices, got {}", rest.len())));
                }
                let idx = rest
                    .iter()
                    .enumerate()
                    .map(|(k, tok)| {
                        tok.parse::<usize>()
                            .map_err(|_| parse_err(path, line_no, Some(k + 2), format!("invalid vertex index {tok:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                cells.push(idx);
            }
            other => return Err(parse_err(path, line_no, Some(1), format!("unknown record type {other:?}"))),
        }
    }
    Ok(SurfaceMesh::new(vertices, cells))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).flexible(true).from_reader(file))
}

fn records(path: &Path) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut out = Vec::new();
    for rec in csv_reader(path)?.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(path, line, None, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        out.push((line, rec));
    }
    Ok(out)
}

fn expect_header(path: &Path, rows: &[(u64, csv::StringRecord)], expected: &[&str]) -> Result<()> {
    let Some((line, header)) = rows.first() else {
        return Err(parse_err(path, 1, None, "missing header row"));
    };
    for (k, name) in expected.iter().enumerate() {
        if header.get(k) != Some(*name) {
            return Err(parse_err(path, *line, Some(k + 1), format!("expected header column {name:?}")));
        }
    }
    Ok(())
}

fn field<F: std::str::FromStr>(path: &Path, line: u64, rec: &csv::StringRecord, col: usize, what: &str) -> Result<F> {
    let raw = rec.get(col).ok_or_else(|| parse_err(path, line, Some(col + 1), format!("missing {what}")))?;
    raw.parse().map_err(|_| parse_err(path, line, Some(col + 1), format!("invalid {what} {raw:?}")))
}

/// Reads `cell_id,region_name`.
pub fn read_regions(path: &Path, cell_count: usize, order: Option<&[String]>) -> Result<RegionPartition> {
    let rows = records(path)?;
    expect_header(path, &rows, &["cell_id", "region_name"])?;
    let mut assignment = Vec::with_capacity(rows.len());
    for (line, rec) in &rows[1..] {
        let cell: usize = field(path, *line, rec, 0, "cell id")?;
        let name: String = field(path, *line, rec, 1, "region name")?;
        if let Some(order) = order {
            if !order.contains(&name) {
                return Err(IngestError::UnknownRegion { file: path.to_path_buf(), line: *line, name });
            }
        }
        assignment.push((cell, name));
    }
    if assignment.len() != cell_count {
        return Err(IngestError::CountMismatch {
            file: path.to_path_buf(),
            message: format!("{} assignments for {} cells", assignment.len(), cell_count),
        });
    }
    let order: Vec<&str> = order.map(|o| o.iter().map(String::as_str).collect()).unwrap_or_default();
    Ok(RegionPartition::from_assignment(assignment.iter().map(|(c, n)| (*c, n.as_str())), &order))
}

/// Reads the level table: header `cell_id,<harmonic Hz>...`, one row per cell.
/// Returns harmonic frequencies and the row-major level table.
pub fn read_levels<T: Real>(path: &Path, cell_count: usize) -> Result<(Vec<T>, Vec<T>)> {
    let rows = records(path)?;
    expect_header(path, &rows, &["cell_id"])?;
    let (hline, header) = &rows[0];
    let harmonics = header
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, raw)| {
            raw.parse::<f64>()
                .map(T::lit)
                .map_err(|_| parse_err(path, *hline, Some(k + 1), format!("invalid harmonic frequency {raw:?}")))
        })
        .collect::<Result<Vec<T>>>()?;
    let n = harmonics.len();
    let body = &rows[1..];
    if body.len() != cell_count {
        return Err(IngestError::CountMismatch {
            file: path.to_path_buf(),
            message: format!("{} level rows for {} cells", body.len(), cell_count),
        });
    }
    let mut levels = vec![T::zero(); cell_count * n];
    let mut seen = vec![false; cell_count];
    for (line, rec) in body {
        if rec.len() != n + 1 {
            return Err(parse_err(path, *line, None, format!("expected {} fields, got {}", n + 1, rec.len())));
        }
        let cell: usize = field(path, *line, rec, 0, "cell id")?;
        if cell >= cell_count || seen[cell] {
            return Err(parse_err(path, *line, Some(1), format!("cell id {cell} out of range or repeated")));
        }
        seen[cell] = true;
        for h in 0..n {
            let v: f64 = field(path, *line, rec, h + 1, "level")?;
            levels[cell * n + h] = T::lit(v);
        }
    }
    Ok((harmonics, levels))
}

/// Reads `band_center_hz,integral_limit_db` keyed by third-octave band number.
pub fn read_limits<T: Real>(path: &Path) -> Result<BTreeMap<i32, T>> {
    let rows = records(path)?;
    expect_header(path, &rows, &["band_center_hz", "integral_limit_db"])?;
    let mut entries = BTreeMap::new();
    for (line, rec) in &rows[1..] {
        let center: f64 = field(path, *line, rec, 0, "band center")?;
        let limit: f64 = field(path, *line, rec, 1, "limit")?;
        let k = third_number_for_nominal(center)
            .ok_or_else(|| parse_err(path, *line, Some(1), format!("{center} Hz is not a one-third octave center")))?;
        if entries.insert(k, T::lit(limit)).is_some() {
            return Err(parse_err(path, *line, Some(1), format!("duplicate limit for {center} Hz")));
        }
    }
    Ok(entries)
}

/// Loads and validates the dataset described by a manifest file.
pub fn load<T: Real>(manifest_path: &Path) -> Result<Dataset<T>> {
    let manifest = read_manifest(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let parts = load_parts(&manifest, base)?;
    Dataset::new(parts).map_err(IngestError::Invalid)
}

/// Reads dataset components without validating them.
pub fn load_parts<T: Real>(manifest: &DatasetManifest, base: &Path) -> Result<DatasetParts<T>> {
    let mesh = read_mesh::<T>(&base.join(&manifest.mesh))?;
    let cells = mesh.cell_count();
    let partition = read_regions(&base.join(&manifest.regions), cells, manifest.region_order.as_deref())?;
    let (harmonics, levels) = read_levels::<T>(&base.join(&manifest.levels), cells)?;
    let entries = match &manifest.limits {
        Some(p) => read_limits::<T>(&base.join(p))?,
        None => BTreeMap::new(),
    };
    let fundamental = T::lit(manifest.speed_rpm / 60.0);
    let n = harmonics.len();
    let scheme = match manifest.bands_hz {
        Some([lo, hi]) => FrequencyScheme::with_nominal_range(fundamental, harmonics, lo, hi)?,
        None => FrequencyScheme::spanning(fundamental, harmonics)?,
    };
    let spectra = SpectrumTable::new(levels, cells, n, T::lit(manifest.reference_velocity), T::lit(manifest.reference_area))
        .expect("table shape matches by construction");
    Ok(DatasetParts {
        mesh,
        partition,
        scheme,
        spectra,
        limits: LimitCurve::new(entries, T::lit(manifest.borderline_width_db)),
        meta: Metadata { speed_rpm: manifest.speed_rpm, label: manifest.label.clone() },
    })
}

/// Files written by [`save`].
#[derive(Debug, Clone, PartialEq)]
pub struct SavedDataset {
    pub manifest: PathBuf,
    /// Every written file with its size in bytes.
    pub files: Vec<(PathBuf, u64)>,
}

fn num<T: Real>(x: T) -> String {
    format_sig9(x.as_f64())
}

fn write_file(path: &Path, contents: &str) -> Result<(PathBuf, u64)> {
    fs::write(path, contents).map_err(io_err(path))?;
    Ok((path.to_path_buf(), contents.len() as u64))
}

/// Writes the dataset as manifest + four data files into `dir`.
pub fn save<T: Real>(dataset: &Dataset<T>, dir: &Path) -> Result<SavedDataset> {
    use std::fmt::Write;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files = Vec::new();

    let mut mesh = String::with_capacity(dataset.mesh.vertex_count() * 40);
    for v in &dataset.mesh.vertices {
        let _ = writeln!(mesh, "v {} {} {}", num(v[0]), num(v[1]), num(v[2]));
    }
    for cell in &dataset.mesh.cells {
        mesh.push('f');
        for i in cell {
            let _ = write!(mesh, " {i}");
        }
        mesh.push('\n');
    }
    files.push(write_file(&dir.join("mesh.txt"), &mesh)?);

    let mut regions = String::from("cell_id,region_name\n");
    let owners = dataset.partition.region_of_cells(dataset.cell_count());
    for (cell, owner) in owners.iter().enumerate() {
        let name = owner.map(|r| dataset.partition.name(r)).unwrap_or_default();
        let _ = writeln!(regions, "{cell},{name}");
    }
    files.push(write_file(&dir.join("regions.csv"), &regions)?);

    let n = dataset.scheme.harmonic_count();
    let mut levels = String::with_capacity(dataset.cell_count() * (n + 1) * 11);
    levels.push_str("cell_id");
    for f in &dataset.scheme.harmonics_hz {
        levels.push(',');
        levels.push_str(&num(*f));
    }
    levels.push('\n');
    for cell in 0..dataset.cell_count() {
        let _ = write!(levels, "{cell}");
        for &l in dataset.spectra.row(cell) {
            levels.push(',');
            levels.push_str(&num(l));
        }
        levels.push('\n');
    }
    files.push(write_file(&dir.join("levels.csv"), &levels)?);

    let mut limits = String::from("band_center_hz,integral_limit_db\n");
    for (k, l) in &dataset.limits.entries {
        let _ = writeln!(limits, "{},{}", nominal_third(*k).0, num(*l));
    }
    files.push(write_file(&dir.join("limits.csv"), &limits)?);

    let bands = dataset.scheme.third_range();
    let manifest = DatasetManifest {
        mesh: "mesh.txt".into(),
        regions: "regions.csv".into(),
        levels: "levels.csv".into(),
        limits: Some("limits.csv".into()),
        speed_rpm: dataset.meta.speed_rpm,
        reference_velocity: dataset.spectra.reference_velocity.as_f64(),
        reference_area: dataset.spectra.reference_area.as_f64(),
        label: dataset.meta.label.clone(),
        borderline_width_db: dataset.limits.borderline_width_db.as_f64(),
        bands_hz: Some([nominal_third(*bands.start()).1, nominal_third(*bands.end()).1]),
        region_order: Some(dataset.partition.regions.iter().map(|r| r.name.clone()).collect()),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    let manifest_path = dir.join("manifest.json");
    files.push(write_file(&manifest_path, &json)?);
    Ok(SavedDataset { manifest: manifest_path, files })
}
