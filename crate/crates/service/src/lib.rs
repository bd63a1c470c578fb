//! Session-scoped HTTP API over the drill-down engine.
//!
//! All routes live under `/api/v1`. Every JSON body has the shape
//! `{"dataset_hash": ..., "data": ...}`; errors are
//! `{"status": code, "error": message}` with 404 for unknown sessions or
//! entities, 409 for stale pane layouts and 422 for invalid parameters.

pub mod config;
pub mod error;
pub mod params;
pub mod routes;
pub mod session;
pub mod wire;

pub use config::{load_state, serve, ServiceConfig, ServiceError};
pub use error::ApiError;
pub use routes::{router, AppState, GrowRequest, SelectionRequest};
pub use session::{SessionStore, DEFAULT_IDLE_TIMEOUT};
