use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::time::Duration;

use nvh_core::ingest::{load, IngestError};
use nvh_core::view::{Palette, PaletteError};
use thiserror::Error;

use crate::routes::{router, AppState};
use crate::session::{SessionStore, DEFAULT_IDLE_TIMEOUT};

pub const DEFAULT_PORT: u16 = 8700;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("NVH_DATASET is not set")]
    NoDataset,
    #[error("invalid {name}={value:?}")]
    Env { name: &'static str, value: String },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Palette(#[from] PaletteError),
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub manifest: PathBuf,
    pub host: IpAddr,
    pub port: u16,
    /// Built-in palette name (`standard`, `colorblind`) or a JSON file path.
    pub palette: Option<String>,
    pub idle_timeout: Duration,
}

impl ServiceConfig {
    pub fn new(manifest: impl Into<PathBuf>) -> Self {
        Self {
            manifest: manifest.into(),
            host: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            palette: None,
            idle_timeout: DEFAULT_IDLE_TIMEOUT,
        }
    }

    /// Reads `NVH_DATASET`, `NVH_PORT`, `NVH_PALETTE`, `NVH_HOST` and
    /// `NVH_SESSION_IDLE_SECS` through `var`.
    pub fn from_vars(var: impl Fn(&str) -> Option<String>) -> Result<Self, ServiceError> {
        let mut config = Self::new(var("NVH_DATASET").ok_or(ServiceError::NoDataset)?);
        config.apply_vars(var)?;
        Ok(config)
    }

    pub fn from_env() -> Result<Self, ServiceError> {
        Self::from_vars(|k| std::env::var(k).ok())
    }

    /// Overrides port, host, palette and idle timeout from variables that are set.
    pub fn apply_vars(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ServiceError> {
        if let Some(v) = var("NVH_PORT") {
            self.port = v.parse().map_err(|_| ServiceError::Env { name: "NVH_PORT", value: v })?;
        }
        if let Some(v) = var("NVH_HOST") {
            self.host = v.parse().map_err(|_| ServiceError::Env { name: "NVH_HOST", value: v })?;
        }
        if let Some(v) = var("NVH_PALETTE") {
            self.palette = Some(v);
        }
        if let Some(v) = var("NVH_SESSION_IDLE_SECS") {
            let secs: u64 = v.parse().map_err(|_| ServiceError::Env { name: "NVH_SESSION_IDLE_SECS", value: v })?;
            self.idle_timeout = Duration::from_secs(secs);
        }
        Ok(())
    }

    pub fn load_palette(&self) -> Result<Palette, ServiceError> {
        Ok(match self.palette.as_deref() {
            None => Palette::standard(),
            Some(name) => match Palette::named(name) {
                Some(p) => p,
                None => Palette::load(std::path::Path::new(name))?,
            },
        })
    }
}

/// Loads the dataset and palette named by `config`.
pub fn load_state(config: &ServiceConfig) -> Result<AppState, ServiceError> {
    let dataset = load(&config.manifest)?;
    let palette = config.load_palette()?;
    Ok(AppState::new(dataset, palette, SessionStore::new(config.idle_timeout)))
}

/// Serves the API until interrupted.
pub async fn serve(config: ServiceConfig) -> Result<(), ServiceError> {
    let state = load_state(&config)?;
    log::info!(
        "serving {} ({} cells, hash {}) on {}:{}",
        state.dataset.meta.label,
        state.dataset.cell_count(),
        &state.dataset.content_hash()[..12],
        config.host,
        config.port
    );
    let listener = tokio::net::TcpListener::bind(SocketAddr::new(config.host, config.port)).await?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_defaults_and_overrides() {
        let vars = |pairs: &'static [(&'static str, &'static str)]| {
            move |k: &str| pairs.iter().find(|(n, _)| *n == k).map(|(_, v)| v.to_string())
        };
        assert!(matches!(ServiceConfig::from_vars(vars(&[])), Err(ServiceError::NoDataset)));
        let c = ServiceConfig::from_vars(vars(&[("NVH_DATASET", "m.json")])).unwrap();
        assert_eq!(c.port, 8700);
        assert_eq!(c.idle_timeout, Duration::from_secs(1800));
        let c = ServiceConfig::from_vars(vars(&[
            ("NVH_DATASET", "m.json"),
            ("NVH_PORT", "9001"),
            ("NVH_PALETTE", "colorblind"),
            ("NVH_SESSION_IDLE_SECS", "5"),
        ]))
        .unwrap();
        assert_eq!((c.port, c.palette.as_deref()), (9001, Some("colorblind")));
        assert_eq!(c.load_palette().unwrap(), Palette::colorblind());
        assert!(ServiceConfig::from_vars(vars(&[("NVH_DATASET", "m"), ("NVH_PORT", "x")])).is_err());
    }
}
