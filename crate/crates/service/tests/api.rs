use std::sync::OnceLock;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use nvh_core::ingest::{generate_synthetic, SyntheticSpec};
use nvh_core::linking::{select_frequency, SelectionState};
use nvh_core::num::round_sig9;
use nvh_core::view::{details_pane, DetailsParams, Palette};
use nvh_core::Dataset;
use nvh_service::wire::{decode_mask, Payload};
use nvh_service::{router, AppState, SessionStore};
use serde_json::{json, Value};
use tower::ServiceExt;

fn dataset() -> &'static Dataset {
    static D: OnceLock<Dataset> = OnceLock::new();
    D.get_or_init(|| generate_synthetic(&SyntheticSpec::demo()).unwrap())
}

fn app_with(sessions: SessionStore) -> Router {
    router(AppState::new(dataset().clone(), Palette::standard(), sessions))
}

fn app() -> Router {
    app_with(SessionStore::default())
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let builder = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => builder.header("content-type", "application/json").body(Body::from(b.to_string())).unwrap(),
        None => builder.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn get_json(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (s, b) = send(app, "GET", uri, None).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

async fn post_json(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    let (s, b) = send(app, "POST", uri, Some(body)).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

async fn new_session(app: &Router) -> String {
    let (s, v) = post_json(app, "/api/v1/session", json!({})).await;
    assert_eq!(s, StatusCode::CREATED);
    v["data"]["session_id"].as_str().unwrap().to_string()
}

fn floats_have_nine_digits(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64() || n.as_f64().is_some_and(|x| round_sig9(x) == x),
        Value::Array(a) => a.iter().all(floats_have_nine_digits),
        Value::Object(m) => m.values().all(floats_have_nine_digits),
        _ => true,
    }
}

fn gets() -> Vec<String> {
    let d = dataset();
    let anchor = d.scheme.band(d.scheme.band_by_label("500").unwrap()).harmonics[1];
    let mut uris: Vec<String> = STATIC_GETS.iter().map(|s| s.to_string()).collect();
    uris.push(format!("/api/v1/harmonics?region=TOTAL&band=500&sort=by-selection&anchor={anchor}"));
    uris
}

const STATIC_GETS: &[&str] = &[
    "/api/v1/dataset/meta",
    "/api/v1/dataset/mesh",
    "/api/v1/matrix?mode=limits",
    "/api/v1/matrix?mode=combined&shades=3&rows=64",
    "/api/v1/matrix?mode=raw&scale=nonlinear&rows=32",
    "/api/v1/harmonics?region=BOTTOM&band=630&rows=64",
    "/api/v1/details?region=BOTTOM&band=500&abs=85&pct=20",
    "/api/v1/boxplots?bands=500,630&regions=BOTTOM,TOP&split=true&bins=12",
    "/api/v1/colors?band=500",
    "/api/v1/colors?harmonic=40&scale=nonlinear",
    "/api/v1/campbell",
    "/api/v1/palette",
];

#[tokio::test]
async fn gets_are_byte_identical_and_carry_the_hash() {
    let app = app();
    for uri in &gets() {
        let (s1, a) = send(&app, "GET", uri, None).await;
        let (s2, b) = send(&app, "GET", uri, None).await;
        assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK), "{uri}: {}", String::from_utf8_lossy(&a));
        assert_eq!(a, b, "{uri}");
        let v: Value = serde_json::from_slice(&a).unwrap();
        assert_eq!(v["dataset_hash"], json!(dataset().content_hash()), "{uri}");
        assert!(floats_have_nine_digits(&v), "{uri}");
    }
}

#[tokio::test]
async fn matrix_is_seven_by_twenty_six() {
    let (s, v) = get_json(&app(), "/api/v1/matrix?mode=limits").await;
    assert_eq!(s, StatusCode::OK);
    let rows = v["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["cells"].as_array().unwrap().len() == 26));
    assert_eq!(v["data"]["columns"].as_array().unwrap().len(), 26);
}

#[tokio::test]
async fn details_payload_is_the_module_output() {
    let d = dataset();
    let (_, v) = get_json(&app(), "/api/v1/details?region=BOTTOM&band=500").await;
    let params = DetailsParams::new(d.partition.find("BOTTOM").unwrap(), d.scheme.band_by_label("500").unwrap());
    let expected = Payload::new(d.content_hash(), details_pane(d, &params).unwrap());
    assert_eq!(v, expected.body);
}

#[tokio::test]
async fn sessions_are_isolated() {
    let app = app();
    let (a, b) = (new_session(&app).await, new_session(&app).await);
    let ua = format!("/api/v1/session/{a}/selection");
    let ub = format!("/api/v1/session/{b}/selection");
    let (ra, rb) = tokio::join!(
        post_json(&app, &ua, json!({ "op": "cells", "cells": [1, 2, 3] })),
        post_json(&app, &ub, json!({ "op": "frequency", "region": "TOP", "band": "630" })),
    );
    assert_eq!((ra.0, rb.0), (StatusCode::OK, StatusCode::OK));
    let (_, va) = get_json(&app, &ua).await;
    let (_, vb) = get_json(&app, &ub).await;
    assert_eq!(va["data"]["cells"], json!({ "ids": [1, 2, 3] }));
    assert_eq!(va["data"]["selected_band"], Value::Null);
    assert_eq!(vb["data"]["selected_region"], json!("TOP"));
    let top = dataset().partition.find("TOP").unwrap();
    assert_eq!(decode_mask(&vb["data"]["cells"]).unwrap(), dataset().region_cells(top).to_vec());

    post_json(&app, &ua, json!({ "op": "clear" })).await;
    let (_, vb2) = get_json(&app, &ub).await;
    assert_eq!(vb, vb2);
}

#[tokio::test]
async fn selection_highlight_round_trip() {
    let d = dataset();
    let app = app();
    let id = new_session(&app).await;
    let (s, _) = post_json(
        &app,
        &format!("/api/v1/session/{id}/selection"),
        json!({ "op": "frequency", "region": "BOTTOM", "band": "500" }),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let (_, h) = get_json(&app, "/api/v1/harmonics?region=BOTTOM&band=500").await;
    let h_layout = h["data"]["layout_id"].as_str().unwrap();
    let (_, dp) = get_json(&app, "/api/v1/details?region=BOTTOM&band=500").await;
    let d_layout = dp["data"]["layout_id"].as_str().unwrap();
    let uri = format!(
        "/api/v1/session/{id}/highlight?panes=matrix,harmonics,details&h.region=BOTTOM&h.band=500&h.layout={h_layout}&d.region=BOTTOM&d.band=500&d.layout={d_layout}"
    );
    let (s, v) = get_json(&app, &uri).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    let bottom = d.partition.find("BOTTOM").unwrap();
    assert_eq!(decode_mask(&v["data"]["mask"]).unwrap(), d.region_cells(bottom).to_vec());
    assert_eq!(v["data"]["matrix"][0]["regions"], json!(["TOTAL", "BOTTOM"]));
    let shares: f64 = v["data"]["details"][0]["category_shares"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((shares - 1.0).abs() < 1e-6);

    let expected = select_frequency(&SelectionState::default(), d, bottom, d.scheme.band_by_label("500").unwrap(), &[], true)
        .unwrap();
    assert_eq!(expected.selected_cells.len(), d.region_cells(bottom).len());
}

#[tokio::test]
async fn large_masks_use_ranges_and_grow_works() {
    let d: Dataset = generate_synthetic(&SyntheticSpec::scenario(15, &[(500.0, 5.4)], 0.6)).unwrap();
    let d = &d;
    let app = router(AppState::new(d.clone(), Palette::standard(), SessionStore::default()));
    let id = new_session(&app).await;
    let sel = format!("/api/v1/session/{id}/selection");
    let (_, v) = post_json(&app, &sel, json!({ "op": "frequency", "region": "TOTAL", "band": "500" })).await;
    assert!(d.cell_count() > 1000);
    assert!(v["data"]["cells"].get("ranges").is_some());
    assert_eq!(v["data"]["cells"]["ranges"], json!([[0, d.cell_count() - 1]]));

    let seed = d.cell_count() / 2;
    post_json(&app, &sel, json!({ "op": "cells", "cells": [seed] })).await;
    let (s, v) = post_json(&app, &format!("{sel}/grow"), json!({ "steps": 1, "band": "500" })).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["data"]["cell_count"], json!(5));
}

#[tokio::test]
async fn not_found_cases() {
    let app = app();
    let id = new_session(&app).await;
    let sel = format!("/api/v1/session/{id}/selection");
    let n = dataset().cell_count();
    let (s, v) = post_json(&app, &sel, json!({ "op": "cells", "cells": [0, n + 7] })).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert!(v["error"].as_str().unwrap().contains(&(n + 7).to_string()), "{v}");

    for uri in [
        "/api/v1/session/nope/selection".to_string(),
        "/api/v1/session/nope/highlight".to_string(),
        "/api/v1/harmonics?region=ROOF&band=500".to_string(),
        "/api/v1/details?region=BOTTOM&band=12345".to_string(),
        "/api/v1/colors?harmonic=999999".to_string(),
        "/api/v1/no-such-route".to_string(),
    ] {
        assert_eq!(get_json(&app, &uri).await.0, StatusCode::NOT_FOUND, "{uri}");
    }
    let (s, _) = post_json(&app, &sel, json!({ "op": "frequency", "region": "ROOF", "band": "500" })).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn stale_layout_is_a_conflict() {
    let app = app();
    let id = new_session(&app).await;
    let (_, h) = get_json(&app, "/api/v1/harmonics?region=BOTTOM&band=500&rows=64").await;
    let layout = h["data"]["layout_id"].as_str().unwrap();
    let base = format!("/api/v1/session/{id}/highlight?panes=harmonics&h.region=BOTTOM&h.band=500");
    let (s, _) = get_json(&app, &format!("{base}&h.rows=64&h.layout={layout}")).await;
    assert_eq!(s, StatusCode::OK);
    let (s, v) = get_json(&app, &format!("{base}&h.rows=128&h.layout={layout}")).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert!(v["error"].as_str().unwrap().contains("layout"));
}

#[tokio::test]
async fn invalid_parameters_are_unprocessable() {
    let app = app();
    let id = new_session(&app).await;
    let sel = format!("/api/v1/session/{id}/selection");
    for uri in [
        "/api/v1/matrix?mode=sparkle",
        "/api/v1/matrix?rows=0",
        "/api/v1/matrix?shades=9",
        "/api/v1/matrix?kind=quarter",
        "/api/v1/harmonics?region=BOTTOM&band=500&sort=by-selection",
        "/api/v1/harmonics?region=BOTTOM&band=500&sort=sideways",
        "/api/v1/harmonics?region=BOTTOM&band=500&rows=many",
        "/api/v1/details?region=BOTTOM&band=500&pct=0",
        "/api/v1/boxplots?bands=",
        "/api/v1/colors",
        "/api/v1/colors?harmonic=3&scale=limits",
    ] {
        let (s, v) = get_json(&app, uri).await;
        assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{uri}: {v}");
        assert_eq!(v["status"], json!(422));
    }
    let (_, h) = get_json(&app, "/api/v1/harmonics?region=BOTTOM&band=500").await;
    let anchor_out = dataset().scheme.band(dataset().scheme.band_by_label("1000").unwrap()).harmonics[0];
    let (s, _) = get_json(&app, &format!("/api/v1/harmonics?region=BOTTOM&band=500&sort=by-selection&anchor={anchor_out}")).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(h["data"]["layout_id"].is_string());

    let (s, _) = send(&app, "POST", &sel, Some(json!("not an object"))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = post_json(&app, &sel, json!({ "op": "teleport" })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = post_json(
        &app,
        &sel,
        json!({ "op": "frequency", "region": "BOTTOM", "band": "500", "harmonics": [anchor_out] }),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = post_json(&app, &format!("{sel}/grow"), json!({ "steps": 0, "band": "500" })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = post_json(&app, &format!("{sel}/grow"), json!({ "steps": 2 })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "grow without any band");
    let (s, _) = get_json(&app, &format!("/api/v1/session/{id}/highlight?panes=harmonics&h.region=BOTTOM&h.band=500")).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "missing layout id");
}

#[tokio::test]
async fn idle_sessions_expire() {
    let app = app_with(SessionStore::new(Duration::from_millis(50)));
    let id = new_session(&app).await;
    let uri = format!("/api/v1/session/{id}/selection");
    assert_eq!(get_json(&app, &uri).await.0, StatusCode::OK);
    tokio::time::sleep(Duration::from_millis(120)).await;
    assert_eq!(get_json(&app, &uri).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn region_default_is_total() {
    let (_, a) = get_json(&app(), "/api/v1/harmonics?band=630").await;
    let (_, b) = get_json(&app(), "/api/v1/harmonics?region=TOTAL&band=630").await;
    assert_eq!(a, b);
    assert_eq!(a["data"]["region"], json!("TOTAL"));
}
