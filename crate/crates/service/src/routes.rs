use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use nvh_core::acoustics::{campbell, classify};
use nvh_core::linking::{
    grow_selection, highlight, refine_by_level, select_cells, select_frequency, select_harmonics, PaneRequest,
    SelectionState,
};
use nvh_core::model::{BandKind, CellId, RegionId};
use nvh_core::view::{
    boxplot_stats, details_pane, harmonics_pane, map_color, matrix_overview, ColorToken, Palette,
};
use nvh_core::Dataset;
use serde::Deserialize;
use serde_json::json;

use crate::error::ApiError;
use crate::params::{self, BoxplotQuery, ColorMode, ColorsQuery, DetailsQuery, HarmonicsQuery, MatrixQuery};
use crate::session::{SessionHandle, SessionStore};
use crate::wire::{encode_mask, Payload};

#[derive(Clone)]
pub struct AppState {
    pub dataset: Arc<Dataset>,
    pub palette: Arc<Palette>,
    pub sessions: SessionStore,
}

impl AppState {
    pub fn new(dataset: Dataset, palette: Palette, sessions: SessionStore) -> Self {
        Self { dataset: Arc::new(dataset), palette: Arc::new(palette), sessions }
    }

    fn payload(&self, data: impl serde::Serialize) -> Payload {
        Payload::new(self.dataset.content_hash(), data)
    }

    fn session(&self, id: &str) -> Result<SessionHandle, ApiError> {
        self.sessions.get(id).ok_or_else(|| ApiError::not_found(format!("unknown session {id:?}")))
    }
}

type ApiResult = Result<Payload, ApiError>;

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/dataset/meta", get(meta))
        .route("/dataset/mesh", get(mesh))
        .route("/matrix", get(matrix))
        .route("/harmonics", get(harmonics))
        .route("/details", get(details))
        .route("/boxplots", get(boxplots))
        .route("/colors", get(colors))
        .route("/campbell", get(campbell_row))
        .route("/palette", get(palette))
        .route("/session", post(create_session))
        .route("/session/{id}/selection", get(get_selection).post(post_selection))
        .route("/session/{id}/selection/grow", post(grow))
        .route("/session/{id}/highlight", get(get_highlight));
    Router::new().nest("/api/v1", api).with_state(state)
}

async fn meta(State(s): State<AppState>) -> ApiResult {
    let d = &*s.dataset;
    let bands = |kind: BandKind| {
        d.band_ids(kind)
            .into_iter()
            .map(|b| {
                let band = d.scheme.band(b);
                json!({
                    "label": band.label,
                    "center_hz": band.center_hz,
                    "lower_hz": band.lower_hz,
                    "upper_hz": band.upper_hz,
                    "harmonics": band.harmonics,
                    "integral_limit": d.integral_limit(b),
                    "discrete_limit": d.discrete_limit(b),
                })
            })
            .collect::<Vec<_>>()
    };
    let regions: Vec<_> = d
        .partition
        .ids()
        .map(|r| json!({ "name": d.partition.name(r), "cells": d.region_cells(r).len(), "area": d.region_area(r) }))
        .collect();
    Ok(s.payload(json!({
        "label": d.meta.label,
        "speed_rpm": d.meta.speed_rpm,
        "cell_count": d.cell_count(),
        "vertex_count": d.mesh.vertex_count(),
        "reference_velocity": d.spectra.reference_velocity,
        "reference_area": d.spectra.reference_area,
        "borderline_width_db": d.borderline_width(),
        "fundamental_hz": d.scheme.fundamental_hz,
        "harmonics_hz": d.scheme.harmonics_hz,
        "out_of_band": d.scheme.out_of_band(),
        "regions": regions,
        "bands": { "third": bands(BandKind::ThirdOctave), "octave": bands(BandKind::Octave) },
        "warnings": d.report().warnings,
    })))
}

async fn mesh(State(s): State<AppState>) -> ApiResult {
    let d = &*s.dataset;
    let region: Vec<usize> = (0..d.cell_count()).map(|c| d.region_of(c).0).collect();
    let inactive: Vec<CellId> = (0..d.cell_count()).filter(|&c| !d.is_active(c)).collect();
    Ok(s.payload(json!({
        "vertices": d.mesh.vertices,
        "faces": d.mesh.cells,
        "region": region,
        "inactive": inactive,
    })))
}

async fn matrix(State(s): State<AppState>, q: Result<Query<MatrixQuery>, QueryRejection>) -> ApiResult {
    let params = q?.params()?;
    Ok(s.payload(matrix_overview(&s.dataset, &params)))
}

async fn harmonics(State(s): State<AppState>, q: Result<Query<HarmonicsQuery>, QueryRejection>) -> ApiResult {
    let params = q?.params(&s.dataset)?;
    Ok(s.payload(harmonics_pane(&s.dataset, &params)?))
}

async fn details(State(s): State<AppState>, q: Result<Query<DetailsQuery>, QueryRejection>) -> ApiResult {
    let params = q?.params(&s.dataset)?;
    Ok(s.payload(details_pane(&s.dataset, &params)?))
}

async fn boxplots(State(s): State<AppState>, q: Result<Query<BoxplotQuery>, QueryRejection>) -> ApiResult {
    let q = q?;
    let d = &*s.dataset;
    let bands = params::list(q.bands.as_deref())
        .into_iter()
        .map(|b| params::band(d, Some(b)))
        .collect::<Result<Vec<_>, _>>()?;
    if bands.is_empty() {
        return Err(ApiError::invalid("bands must name at least one band"));
    }
    let regions = params::list(q.regions.as_deref())
        .into_iter()
        .map(|r| params::region(d, Some(r)))
        .collect::<Result<Vec<_>, _>>()?;
    let split = params::parse::<bool>("split", q.split.as_deref())?.unwrap_or(false);
    let bins = params::parse::<usize>("bins", q.bins.as_deref())?.unwrap_or(20);
    Ok(s.payload(boxplot_stats(d, &bands, &regions, split, bins)?))
}

async fn colors(State(s): State<AppState>, q: Result<Query<ColorsQuery>, QueryRejection>) -> ApiResult {
    let q = q?;
    let d = &*s.dataset;
    let n = d.cell_count();
    let (target, levels): (String, Vec<Option<f64>>) = match (q.band.as_deref(), q.harmonic.as_deref()) {
        (Some(label), None) => {
            let band = params::band(d, Some(label))?;
            (d.scheme.band_label(band), (0..n).map(|c| d.cell_band_level(c, band)).collect())
        }
        (None, Some(_)) => {
            let h = params::harmonic(d, "harmonic", q.harmonic.as_deref())?.expect("harmonic given");
            (format!("h{h}"), (0..n).map(|c| Some(d.cell_harmonic_level(c, h))).collect())
        }
        _ => return Err(ApiError::invalid("give exactly one of band or harmonic")),
    };
    let mode = q.mode(q.harmonic.is_some())?;
    let limit = q.band.as_deref().and_then(|b| d.scheme.band_by_label(b)).and_then(|b| d.discrete_limit(b));
    let tokens: Vec<ColorToken> = levels
        .iter()
        .enumerate()
        .map(|(c, level)| match (level.filter(|_| d.is_active(c)), mode) {
            (None, _) => ColorToken::Undefined,
            (Some(l), ColorMode::Limits { shades }) => {
                ColorToken::from_acceptance(classify(l, limit, d.borderline_width(), shades))
            }
            (Some(l), ColorMode::Scale(scale)) => map_color(l, &scale),
        })
        .collect();
    let scale = match mode {
        ColorMode::Limits { shades } => json!({ "type": "limits", "shades": shades, "discrete_limit": limit }),
        ColorMode::Scale(scale) => json!(scale),
    };
    Ok(s.payload(json!({ "target": target, "scale": scale, "tokens": tokens })))
}

async fn campbell_row(State(s): State<AppState>, q: Result<Query<HashMap<String, String>>, QueryRejection>) -> ApiResult {
    let q = q?;
    let kind = params::kind(q.get("kind").map(String::as_str))?;
    let matrix = campbell(&[&*s.dataset], kind).map_err(|e| ApiError::invalid(e.to_string()))?;
    Ok(s.payload(matrix))
}

async fn palette(State(s): State<AppState>) -> ApiResult {
    Ok(s.payload(&*s.palette))
}

fn selection_body(d: &Dataset, state: &SelectionState) -> serde_json::Value {
    let cells: Vec<CellId> = state.selected_cells.iter().copied().collect();
    json!({
        "selected_region": state.selected_region,
        "selected_band": state.selected_band.map(|b| d.scheme.band_label(b)),
        "selected_harmonics": state.selected_harmonics,
        "frozen": state.frozen,
        "origin": state.origin,
        "cell_count": cells.len(),
        "cells": encode_mask(&cells),
    })
}

async fn create_session(State(s): State<AppState>) -> ApiResult {
    let id = s.sessions.create();
    let state = SelectionState::default();
    Ok(s
        .payload(json!({ "session_id": id, "selection": selection_body(&s.dataset, &state) }))
        .with_status(StatusCode::CREATED))
}

async fn get_selection(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let session = s.session(&id)?;
    let state = session.lock().await;
    Ok(s.payload(selection_body(&s.dataset, &state)))
}

fn default_frozen() -> bool {
    true
}

/// Body of `POST /session/{id}/selection`.
#[derive(Debug, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SelectionRequest {
    Frequency {
        region: String,
        band: String,
        #[serde(default)]
        harmonics: Vec<usize>,
        #[serde(default = "default_frozen")]
        frozen: bool,
    },
    Cells {
        cells: Vec<CellId>,
        #[serde(default)]
        extend: bool,
    },
    Harmonics {
        harmonics: Vec<usize>,
    },
    Refine {
        band: String,
        low: f64,
        high: f64,
    },
    Clear,
}

async fn post_selection(
    State(s): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<SelectionRequest>, JsonRejection>,
) -> ApiResult {
    let session = s.session(&id)?;
    let Json(request) = body?;
    let d = &*s.dataset;
    let mut state = session.lock().await;
    let next = match request {
        SelectionRequest::Frequency { region, band, harmonics, frozen } => {
            let r = params::region(d, Some(&region))?;
            let b = params::band(d, Some(&band))?;
            select_frequency(&state, d, r, b, &harmonics, frozen)?
        }
        SelectionRequest::Cells { cells, extend } => select_cells(&state, d, &cells, extend)?,
        SelectionRequest::Harmonics { harmonics } => select_harmonics(&state, d, &harmonics)?,
        SelectionRequest::Refine { band, low, high } => {
            if !(low <= high) {
                return Err(ApiError::invalid("refine needs low <= high"));
            }
            refine_by_level(&state, d, params::band(d, Some(&band))?, low, high)
        }
        SelectionRequest::Clear => SelectionState::default(),
    };
    *state = next;
    Ok(s.payload(selection_body(d, &state)))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowRequest {
    pub steps: usize,
    #[serde(default)]
    pub min_level: Option<f64>,
    #[serde(default)]
    pub band: Option<String>,
}

async fn grow(
    State(s): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<GrowRequest>, JsonRejection>,
) -> ApiResult {
    let session = s.session(&id)?;
    let Json(request) = body?;
    let d = &*s.dataset;
    let mut state = session.lock().await;
    let band = match request.band.as_deref() {
        Some(label) => params::band(d, Some(label))?,
        None => state.selected_band.ok_or(nvh_core::linking::LinkError::NoBand)?,
    };
    let next = grow_selection(&state, d, request.steps, request.min_level, band)?;
    *state = next;
    Ok(s.payload(selection_body(d, &state)))
}

/// Panes of a highlight request. Harmonics parameters use the `h.` prefix,
/// details parameters the `d.` prefix, each with a `layout` id.
fn pane_requests(d: &Dataset, q: &HashMap<String, String>) -> Result<Vec<PaneRequest<f64>>, ApiError> {
    let get = |k: &str| q.get(k).cloned();
    let layout = |prefix: &str| {
        get(&format!("{prefix}.layout")).ok_or_else(|| ApiError::invalid(format!("missing {prefix}.layout")))
    };
    let mut panes = Vec::new();
    for pane in params::list(q.get("panes").map(String::as_str).or(Some("matrix"))) {
        panes.push(match pane {
            "matrix" => PaneRequest::Matrix { kind: params::kind(q.get("kind").map(String::as_str))? },
            "harmonics" => {
                let hq = HarmonicsQuery {
                    region: get("h.region"),
                    band: get("h.band"),
                    rows: get("h.rows"),
                    sort: get("h.sort"),
                    anchor: get("h.anchor"),
                    scale: get("h.scale"),
                };
                PaneRequest::Harmonics { params: hq.params(d)?, layout_id: layout("h")? }
            }
            "details" => {
                let dq = DetailsQuery {
                    region: get("d.region"),
                    band: get("d.band"),
                    abs: get("d.abs"),
                    pct: get("d.pct"),
                    rows: get("d.rows"),
                    shades: get("d.shades"),
                    scale: get("d.scale"),
                };
                PaneRequest::Details { params: dq.params(d)?, layout_id: layout("d")? }
            }
            other => return Err(ApiError::invalid(format!("unknown pane {other:?}"))),
        });
    }
    Ok(panes)
}

async fn get_highlight(
    State(s): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<HashMap<String, String>>, QueryRejection>,
) -> ApiResult {
    let session = s.session(&id)?;
    let Query(q) = q?;
    let d = &*s.dataset;
    let panes = pane_requests(d, &q)?;
    let state = session.lock().await;
    let payload = highlight(&state, d, &panes)?;
    let matrix: Vec<_> = payload
        .matrix
        .iter()
        .map(|m| {
            let regions: Vec<&str> = {
                let mut rows: Vec<usize> = m.cells.iter().map(|rc| rc[0]).collect();
                rows.dedup();
                rows.into_iter().map(|r| d.partition.name(RegionId(r))).collect()
            };
            json!({ "kind": m.kind, "cells": m.cells, "regions": regions })
        })
        .collect();
    Ok(s.payload(json!({
        "matrix": matrix,
        "harmonics": payload.harmonics,
        "details": payload.details,
        "mask": encode_mask(&payload.mask),
    })))
}
