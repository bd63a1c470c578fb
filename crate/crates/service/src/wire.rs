//! JSON wire format: every body carries the dataset hash, floats are
//! rounded to nine significant digits and large cell masks are sent as
//! inclusive id ranges.

use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use nvh_core::model::CellId;
use nvh_core::num::round_sig9;
use serde::Serialize;
use serde_json::{json, Number, Value};

/// Masks with more ids than this are encoded as `ranges`.
pub const MASK_RANGE_THRESHOLD: usize = 1000;

/// Rounds every non-integer number in `value` to nine significant digits.
pub fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(r) = n.as_f64().map(round_sig9).and_then(Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// `{"ids": [...]}` for small masks, `{"ranges": [[first, last], ...]}` otherwise.
/// `ids` must be ascending.
pub fn encode_mask(ids: &[CellId]) -> Value {
    if ids.len() <= MASK_RANGE_THRESHOLD {
        return json!({ "ids": ids });
    }
    let mut ranges: Vec<[CellId; 2]> = Vec::new();
    for &id in ids {
        match ranges.last_mut() {
            Some(r) if r[1] + 1 == id => r[1] = id,
            _ => ranges.push([id, id]),
        }
    }
    json!({ "count": ids.len(), "ranges": ranges })
}

/// Expands either mask encoding back into ascending ids.
pub fn decode_mask(mask: &Value) -> Option<Vec<CellId>> {
    if let Some(ids) = mask.get("ids") {
        return serde_json::from_value(ids.clone()).ok();
    }
    let ranges: Vec<[CellId; 2]> = serde_json::from_value(mask.get("ranges")?.clone()).ok()?;
    Some(ranges.into_iter().flat_map(|[a, b]| a..=b).collect())
}

/// A serialized, rounded JSON body tagged with the dataset hash.
#[derive(Debug, Clone, PartialEq)]
pub struct Payload {
    pub status: StatusCode,
    pub body: Value,
}

impl Payload {
    pub fn new(dataset_hash: &str, data: impl Serialize) -> Self {
        let mut data = serde_json::to_value(data).expect("payload serializes");
        round_numbers(&mut data);
        Self { status: StatusCode::OK, body: json!({ "dataset_hash": dataset_hash, "data": data }) }
    }

    pub fn with_status(mut self, status: StatusCode) -> Self {
        self.status = status;
        self
    }
}

impl IntoResponse for Payload {
    fn into_response(self) -> Response {
        let bytes = serde_json::to_vec(&self.body).expect("json value serializes");
        (self.status, [(header::CONTENT_TYPE, "application/json")], bytes).into_response()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_integers() {
        let mut v = json!({ "a": 1.0 / 3.0, "b": [7, 93.5, 1e-20 / 3.0], "c": "x" });
        round_numbers(&mut v);
        assert_eq!(v["a"], json!(0.333333333));
        assert_eq!(v["b"][0], json!(7));
        assert_eq!(v["b"][1], json!(93.5));
        assert_eq!(v["b"][2].as_f64().unwrap(), 3.33333333e-21);
    }

    #[test]
    fn masks_switch_to_ranges() {
        let small: Vec<usize> = (0..10).collect();
        assert_eq!(encode_mask(&small), json!({ "ids": small }));
        let big: Vec<usize> = (0..600).chain(1000..1500).chain([2000]).collect();
        let m = encode_mask(&big);
        assert_eq!(m["ranges"], json!([[0, 599], [1000, 1499], [2000, 2000]]));
        assert_eq!(decode_mask(&m).unwrap(), big);
        assert_eq!(decode_mask(&encode_mask(&small)).unwrap(), small);
    }
}
