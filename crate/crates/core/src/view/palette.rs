//! Abstract color tokens and the palette files that resolve them to RGB.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::acoustics::{Acceptance, AcceptanceCategory};

/// Resolution of diverging-scale positions carried by tokens.
pub const DIVERGE_STEPS: u16 = 10_000;

/// Renderer-independent color name.
///
/// Category tokens carry the shade index when shading is active; diverging
/// tokens carry the scale position `t ∈ [0, 1]` in steps of 1e-4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorToken {
    Accept(Option<u8>),
    Border(Option<u8>),
    Unaccept(Option<u8>),
    Undefined,
    Diverge(u16),
}

impl ColorToken {
    pub fn from_acceptance(a: Acceptance) -> Self {
        match a.category {
            AcceptanceCategory::Acceptable => Self::Accept(a.shade),
            AcceptanceCategory::Borderline => Self::Border(a.shade),
            AcceptanceCategory::Unacceptable => Self::Unaccept(a.shade),
            AcceptanceCategory::Undefined => Self::Undefined,
        }
    }

    /// Quantizes `t` (clamped to `[0, 1]`) to a diverging token.
    pub fn diverge(t: f64) -> Self {
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        Self::Diverge((t * f64::from(DIVERGE_STEPS)).round() as u16)
    }

    pub fn category(self) -> Option<AcceptanceCategory> {
        match self {
            Self::Accept(_) => Some(AcceptanceCategory::Acceptable),
            Self::Border(_) => Some(AcceptanceCategory::Borderline),
            Self::Unaccept(_) => Some(AcceptanceCategory::Unacceptable),
            Self::Undefined => Some(AcceptanceCategory::Undefined),
            Self::Diverge(_) => None,
        }
    }

    pub fn diverge_position(self) -> Option<f64> {
        match self {
            Self::Diverge(q) => Some(f64::from(q) / f64::from(DIVERGE_STEPS)),
            _ => None,
        }
    }
}

impl fmt::Display for ColorToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shaded = |f: &mut fmt::Formatter<'_>, name: &str, shade: &Option<u8>| match shade {
            Some(s) => write!(f, "{name}_{s}"),
            None => f.write_str(name),
        };
        match self {
            Self::Accept(s) => shaded(f, "ACCEPT", s),
            Self::Border(s) => shaded(f, "BORDER", s),
            Self::Unaccept(s) => shaded(f, "UNACCEPT", s),
            Self::Undefined => f.write_str("UNDEFINED"),
            Self::Diverge(q) => write!(f, "DIVERGE({:.4})", f64::from(*q) / f64::from(DIVERGE_STEPS)),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unrecognized color token {0:?}")]
pub struct TokenParseError(pub String);

impl FromStr for ColorToken {
    type Err = TokenParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TokenParseError(s.to_string());
        if s == "UNDEFINED" {
            return Ok(Self::Undefined);
        }
        if let Some(inner) = s.strip_prefix("DIVERGE(").and_then(|r| r.strip_suffix(')')) {
            let t: f64 = inner.parse().map_err(|_| err())?;
            if !(0.0..=1.0).contains(&t) {
                return Err(err());
            }
            return Ok(Self::diverge(t));
        }
        let (name, shade) = match s.rsplit_once('_') {
            Some((name, digits)) => (name, Some(digits.parse::<u8>().map_err(|_| err())?)),
            None => (s, None),
        };
        match name {
            "ACCEPT" => Ok(Self::Accept(shade)),
            "BORDER" => Ok(Self::Border(shade)),
            "UNACCEPT" => Ok(Self::Unaccept(shade)),
            _ => Err(err()),
        }
    }
}

impl Serialize for ColorToken {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ColorToken {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum PaletteError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("palette JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("palette entry {token:?} has invalid color {value:?} (expected #rrggbb)")]
    BadColor { token: String, value: String },
    #[error("palette lacks required token {0}")]
    Missing(String),
}

/// Token → `#rrggbb` mapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Palette {
    pub colors: BTreeMap<String, String>,
}

const DEFAULT_JSON: &str = include_str!("../../assets/palette-default.json");
const COLORBLIND_JSON: &str = include_str!("../../assets/palette-colorblind.json");

impl Palette {
    pub fn standard() -> Self {
        Self::from_json(DEFAULT_JSON).expect("bundled palette is valid")
    }

    pub fn colorblind() -> Self {
        Self::from_json(COLORBLIND_JSON).expect("bundled palette is valid")
    }

    /// `"default"` or `"colorblind"`.
    pub fn named(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::standard()),
            "colorblind" => Some(Self::colorblind()),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, PaletteError> {
        let palette: Palette = serde_json::from_str(text)?;
        palette.check()?;
        Ok(palette)
    }

    pub fn load(path: &Path) -> Result<Self, PaletteError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| PaletteError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    fn check(&self) -> Result<(), PaletteError> {
        for (token, value) in &self.colors {
            if parse_hex(value).is_none() {
                return Err(PaletteError::BadColor { token: token.clone(), value: value.clone() });
            }
        }
        for required in ["ACCEPT", "BORDER", "UNACCEPT", "UNDEFINED", "DIVERGE_LOW", "DIVERGE_MID", "DIVERGE_HIGH"] {
            if !self.colors.contains_key(required) {
                return Err(PaletteError::Missing(required.into()));
            }
        }
        Ok(())
    }

    /// RGB hex for a token. Shaded tokens without an entry fall back to the
    /// unshaded category color; diverging tokens interpolate between the
    /// three `DIVERGE_*` anchors.
    pub fn resolve(&self, token: ColorToken) -> String {
        if let Some(t) = token.diverge_position() {
            let (a, b, u) = if t <= 0.5 {
                ("DIVERGE_LOW", "DIVERGE_MID", t * 2.0)
            } else {
                ("DIVERGE_MID", "DIVERGE_HIGH", t * 2.0 - 1.0)
            };
            let lo = parse_hex(&self.colors[a]).expect("checked");
            let hi = parse_hex(&self.colors[b]).expect("checked");
            let mix = |i: usize| (f64::from(lo[i]) + (f64::from(hi[i]) - f64::from(lo[i])) * u).round() as u8;
            return format!("#{:02x}{:02x}{:02x}", mix(0), mix(1), mix(2));
        }
        let name = token.to_string();
        if let Some(c) = self.colors.get(&name) {
            return c.clone();
        }
        let base = name.rsplit_once('_').map_or(name.as_str(), |(b, _)| b);
        self.colors.get(base).cloned().unwrap_or_else(|| self.colors["UNDEFINED"].clone())
    }
}

fn parse_hex(s: &str) -> Option<[u8; 3]> {
    let digits = s.strip_prefix('#')?;
    if digits.len() != 6 || !digits.is_ascii() {
        return None;
    }
    let byte = |i: usize| u8::from_str_radix(&digits[i..i + 2], 16).ok();
    Some([byte(0)?, byte(2)?, byte(4)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_names_round_trip() {
        let tokens = [
            ColorToken::Accept(Some(2)),
            ColorToken::Border(Some(0)),
            ColorToken::Unaccept(None),
            ColorToken::Undefined,
            ColorToken::diverge(0.5),
            ColorToken::diverge(0.0307),
        ];
        for t in tokens {
            assert_eq!(t.to_string().parse::<ColorToken>().unwrap(), t);
        }
        assert_eq!(ColorToken::Accept(Some(2)).to_string(), "ACCEPT_2");
        assert_eq!(ColorToken::diverge(0.5).to_string(), "DIVERGE(0.5000)");
        assert!("PURPLE".parse::<ColorToken>().is_err());
    }

    #[test]
    fn bundled_palettes_resolve_everything() {
        for p in [Palette::standard(), Palette::colorblind()] {
            assert_eq!(p.resolve(ColorToken::diverge(0.5)), p.colors["DIVERGE_MID"]);
            assert_eq!(p.resolve(ColorToken::diverge(0.0)), p.colors["DIVERGE_LOW"]);
            assert_eq!(p.resolve(ColorToken::diverge(1.0)), p.colors["DIVERGE_HIGH"]);
            assert_eq!(p.resolve(ColorToken::Border(Some(9))), p.colors["BORDER"]);
        }
        assert_ne!(Palette::standard(), Palette::colorblind());
    }

    #[test]
    fn rejects_bad_palettes() {
        assert!(matches!(Palette::from_json(r#"{"ACCEPT":"green"}"#), Err(PaletteError::BadColor { .. })));
        assert!(matches!(Palette::from_json(r##"{"ACCEPT":"#00ff00"}"##), Err(PaletteError::Missing(_))));
    }
}
