//! Diverging color scales for raw level display.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::Real;

use super::palette::ColorToken;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleKind {
    /// Position piecewise linear in dB between the anchors.
    Linear,
    /// Position linear in velocity amplitude between the outer anchors.
    Nonlinear,
}

impl std::str::FromStr for ScaleKind {
    type Err = ScaleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" | "linear-diverging" => Ok(Self::Linear),
            "nonlinear" | "nonlinear-diverging" => Ok(Self::Nonlinear),
            other => Err(ScaleError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScaleError {
    #[error("scale anchors must be finite and strictly ascending, got {0:?}")]
    Anchors([f64; 3]),
    #[error("unknown color scale {0:?} (expected linear or nonlinear)")]
    UnknownKind(String),
}

/// Three-anchor diverging scale: `low` maps to `t = 0`, `mid` to `t = 0.5`
/// (linear kind only) and `high` to `t = 1`. Levels outside are clamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorScale<T> {
    pub kind: ScaleKind,
    pub low: T,
    pub mid: T,
    pub high: T,
}

impl<T: Real> ColorScale<T> {
    pub fn new(kind: ScaleKind, low: T, mid: T, high: T) -> Result<Self, ScaleError> {
        let ok = [low, mid, high].iter().all(|v| v.is_finite()) && low < mid && mid < high;
        if !ok {
            return Err(ScaleError::Anchors([low.as_f64(), mid.as_f64(), high.as_f64()]));
        }
        Ok(Self { kind, low, mid, high })
    }

    /// 60 / 90 / 120 dB.
    pub fn standard(kind: ScaleKind) -> Self {
        Self { kind, low: T::lit(60.0), mid: T::lit(90.0), high: T::lit(120.0) }
    }

    /// Unquantized scale position in `[0, 1]`.
    pub fn position(&self, level: T) -> f64 {
        let half = T::lit(0.5);
        let t = match self.kind {
            ScaleKind::Linear => {
                if level <= self.mid {
                    half * (level - self.low) / (self.mid - self.low)
                } else {
                    half + half * (level - self.mid) / (self.high - self.mid)
                }
            }
            ScaleKind::Nonlinear => {
                let amp = |l: T| T::lit(10.0).powf(l / T::lit(20.0));
                let l = level.max(self.low).min(self.high);
                (amp(l) - amp(self.low)) / (amp(self.high) - amp(self.low))
            }
        };
        t.as_f64().clamp(0.0, 1.0)
    }
}

pub fn map_color<T: Real>(level: T, scale: &ColorScale<T>) -> ColorToken {
    ColorToken::diverge(scale.position(level))
}
