//! Batch commands behind the `nvh` binary.
//!
//! Exit codes: 0 on success, 1 when a dataset fails to load or validate,
//! 2 on usage errors.

use std::io::Write;
use std::net::IpAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nvh_core::acoustics::{campbell, CampbellError};
use nvh_core::ingest::{generate_synthetic, load, save, IngestError, SyntheticSpec};
use nvh_core::model::BandKind;
use nvh_core::num::{format_sig9, round_sig9};
use nvh_core::report::ReportDocument;
use nvh_core::view::{matrix_overview, MatrixMode, MatrixOverview, MatrixParams, ScaleKind};
use nvh_core::Dataset;
use nvh_service::{ServiceConfig, ServiceError};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "nvh", version, about = "Drill-down acceptance analysis of structure-borne noise results")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Third,
    Octave,
}

impl From<Kind> for BandKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Third => BandKind::ThirdOctave,
            Kind::Octave => BandKind::Octave,
        }
    }
}

fn parse_mode(s: &str) -> Result<MatrixMode, String> {
    s.parse::<MatrixMode>().map_err(|e| {
        let names: Vec<&str> = MatrixMode::ALL.iter().map(|m| m.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

fn parse_scale(s: &str) -> Result<ScaleKind, String> {
    s.parse::<ScaleKind>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a dataset and check every invariant.
    Validate { manifest: PathBuf },
    /// Write a synthetic dataset. SPEC is `demo`, `scenario` or a JSON spec file.
    Synth { spec: String, out: PathBuf },
    /// Acceptance report of integral levels against limits.
    Report {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_enum, default_value = "third")]
        kind: Kind,
    },
    /// Overview matrix as CSV, one row per region and one column per band.
    ExportMatrix {
        manifest: PathBuf,
        #[arg(long, default_value = "limits", value_parser = parse_mode)]
        mode: MatrixMode,
        #[arg(long, value_enum, default_value = "third")]
        kind: Kind,
        #[arg(long, default_value_t = nvh_core::acoustics::DEFAULT_SHADES, value_parser = clap::value_parser!(u8).range(1..=nvh_core::acoustics::MAX_SHADES as i64))]
        shades: u8,
        #[arg(long, default_value_t = nvh_core::view::DEFAULT_MATRIX_ROWS, value_parser = parse_rows)]
        rows: usize,
        #[arg(long, default_value = "linear", value_parser = parse_scale)]
        scale: ScaleKind,
    },
    /// TOTAL integral level per band for each dataset, one row per speed.
    Campbell {
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "third")]
        kind: Kind,
    },
    /// Serve the HTTP API. NVH_PORT, NVH_HOST, NVH_PALETTE and
    /// NVH_SESSION_IDLE_SECS apply unless overridden by flags.
    Serve {
        manifest: PathBuf,
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        host: Option<IpAddr>,
        #[arg(long)]
        palette: Option<String>,
    },
}

fn parse_rows(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("rows must be a positive integer, got {s:?}")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Campbell(#[from] CampbellError),
    #[error(transparent)]
    Service(#[from] ServiceError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("output error: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    Ok(load(path)?)
}

/// Runs one command, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { manifest } => validate(&manifest, out),
        Command::Synth { spec, out: dir } => synth(&spec, &dir, out),
        Command::Report { manifest, format, kind } => {
            let doc = ReportDocument::build(&load_dataset(&manifest)?, kind.into());
            let text = match format {
                Format::Text => doc.to_text(),
                Format::Csv => doc.to_csv(),
                Format::Json => doc.to_json() + "\n",
            };
            Ok(out.write_all(text.as_bytes())?)
        }
        Command::ExportMatrix { manifest, mode, kind, shades, rows, scale } => {
            let d = load_dataset(&manifest)?;
            let params = MatrixParams {
                mode,
                kind: kind.into(),
                shades,
                rows,
                scale: nvh_core::view::ColorScale::standard(scale),
                ..MatrixParams::default()
            };
            Ok(out.write_all(matrix_csv(&matrix_overview(&d, &params)).as_bytes())?)
        }
        Command::Campbell { manifests, kind } => {
            let datasets = manifests.iter().map(|m| load_dataset(m)).collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Dataset> = datasets.iter().collect();
            let c = campbell(&refs, kind.into())?;
            let mut csv = format!("speed_rpm,label,{}\n", c.columns.join(","));
            for ((speed, label), row) in c.speeds_rpm.iter().zip(&c.labels).zip(&c.rows) {
                let cells: Vec<String> = row.iter().map(|v| v.map(|x| format_sig9(round_sig9(x))).unwrap_or_default()).collect();
                csv.push_str(&format!("{},{},{}\n", format_sig9(*speed), label, cells.join(",")));
            }
            Ok(out.write_all(csv.as_bytes())?)
        }
        Command::Serve { manifest, port, host, palette } => {
            let mut config = ServiceConfig::new(manifest);
            config.apply_vars(|k| std::env::var(k).ok())?;
            config.port = port.unwrap_or(config.port);
            config.host = host.unwrap_or(config.host);
            config.palette = palette.or(config.palette);
            let runtime = tokio::runtime::Runtime::new()?;
            Ok(runtime.block_on(nvh_service::serve(config))?)
        }
    }
}

fn validate(manifest: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let d = load_dataset(manifest)?;
    writeln!(out, "OK")?;
    writeln!(
        out,
        "{}: {} cells, {} regions, {} harmonics, {} third-octave bands, hash {}",
        d.meta.label,
        d.cell_count(),
        d.partition.row_count() - 1,
        d.scheme.harmonic_count(),
        d.scheme.bands(BandKind::ThirdOctave).len(),
        d.content_hash()
    )?;
    for w in &d.report().warnings {
        writeln!(out, "warning: {w}")?;
    }
    Ok(())
}

fn synth(spec: &str, dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = match spec {
        "demo" => SyntheticSpec::demo(),
        "scenario" => SyntheticSpec::scenario(45, &[(500.0, 5.4), (630.0, 5.7)], 0.6),
        path => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?
        }
    };
    let d: Dataset = generate_synthetic(&spec)?;
    let saved = save(&d, dir)?;
    writeln!(out, "wrote {} ({} cells, hash {})", saved.manifest.display(), d.cell_count(), d.content_hash())?;
    Ok(())
}

/// `region,<band labels>` header, then one row per region. Flat modes
/// give category names; striped modes give `TOKEN:fraction;...` lists.
pub fn matrix_csv(m: &MatrixOverview<f64>) -> String {
    let labels: Vec<&str> = m.columns.iter().map(|c| c.label.as_str()).collect();
    let mut csv = format!("region,{}\n", labels.join(","));
    let flat = matches!(m.mode, MatrixMode::Limits | MatrixMode::WorstCell);
    for row in &m.rows {
        let cells: Vec<String> = row
            .cells
            .iter()
            .map(|c| if flat { c.acceptance.category.name().to_string() } else { c.payload.describe() })
            .collect();
        csv.push_str(&format!("{},{}\n", row.region, cells.join(",")));
    }
    csv
}
