//! Acceptance classification against integral and discrete limits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::num::Real;

pub const DEFAULT_SHADES: u8 = 3;
pub const MAX_SHADES: u8 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AcceptanceCategory {
    Acceptable,
    Borderline,
    Unacceptable,
    Undefined,
}

impl AcceptanceCategory {
    pub fn name(self) -> &'static str {
        match self {
            Self::Acceptable => "Acceptable",
            Self::Borderline => "Borderline",
            Self::Unacceptable => "Unacceptable",
            Self::Undefined => "Undefined",
        }
    }

    /// Ordinal severity for the three defined categories.
    pub fn severity(self) -> Option<u8> {
        match self {
            Self::Acceptable => Some(0),
            Self::Borderline => Some(1),
            Self::Unacceptable => Some(2),
            Self::Undefined => None,
        }
    }

    pub fn from_severity(s: usize) -> Self {
        match s {
            0 => Self::Acceptable,
            1 => Self::Borderline,
            _ => Self::Unacceptable,
        }
    }
}

impl fmt::Display for AcceptanceCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Category plus an optional lightness shade.
///
/// Shades count upward in dB inside each category: for Acceptable shade 0 is
/// farthest below the limit, for Borderline the last shade sits next to
/// Unacceptable, for Unacceptable the last shade is the most severe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Acceptance {
    pub category: AcceptanceCategory,
    pub shade: Option<u8>,
}

impl Acceptance {
    pub const UNDEFINED: Acceptance = Acceptance { category: AcceptanceCategory::Undefined, shade: None };
}

/// Classifies `level` against `limit` (top of the acceptable range) with a
/// borderline window of `width` dB. Intervals are lower-inclusive:
/// `[limit, limit + width)` is Borderline.
pub fn classify<T: Real>(level: T, limit: Option<T>, width: T, shades: u8) -> Acceptance {
    let Some(limit) = limit else {
        return Acceptance::UNDEFINED;
    };
    let shades = shades.max(1);
    let (category, lower) = if level < limit {
        (AcceptanceCategory::Acceptable, limit - width)
    } else if level < limit + width {
        (AcceptanceCategory::Borderline, limit)
    } else {
        (AcceptanceCategory::Unacceptable, limit + width)
    };
    let shade = (shades > 1).then(|| {
        let step = width / T::lit(shades as f64);
        let raw = ((level - lower) / step).floor();
        let max = T::lit((shades - 1) as f64);
        raw.max(T::zero()).min(max).to_u8().unwrap_or(0)
    });
    Acceptance { category, shade }
}

/// Discrete limit = integral limit − 10 log10(total_area / A_ref).
pub fn discrete_limit<T: Real>(integral_limit: T, total_area: T, reference_area: T) -> T {
    integral_limit - T::lit(10.0) * (total_area / reference_area).log10()
}

/// Per-band discrete limits for a list of optional integral limits.
pub fn derive_discrete_limits<T: Real>(
    integral_limits: &[Option<T>],
    total_area: T,
    reference_area: T,
) -> Vec<Option<T>> {
    integral_limits
        .iter()
        .map(|l| l.map(|l| discrete_limit(l, total_area, reference_area)))
        .collect()
}
