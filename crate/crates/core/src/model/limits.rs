//! Per-band integral velocity level limits.

use std::collections::BTreeMap;

use crate::num::Real;

use super::frequency::{BandId, BandKind, FrequencyScheme};

pub const DEFAULT_BORDERLINE_WIDTH_DB: f64 = 6.0;

/// Integral limits keyed by third-octave band number (relative to 1 kHz).
///
/// The limit is the upper edge of the acceptable range; the borderline range
/// spans `[limit, limit + borderline_width_db)`. Bands without an entry are
/// unlimited and classify as undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCurve<T> {
    pub entries: BTreeMap<i32, T>,
    pub borderline_width_db: T,
}

impl<T: Real> Default for LimitCurve<T> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<T: Real> LimitCurve<T> {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new(), borderline_width_db: T::lit(DEFAULT_BORDERLINE_WIDTH_DB) }
    }

    pub fn new(entries: BTreeMap<i32, T>, borderline_width_db: T) -> Self {
        Self { entries, borderline_width_db }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Integral limit of a band; octave bands carry no limits.
    pub fn integral_limit(&self, scheme: &FrequencyScheme<T>, band: BandId) -> Option<T> {
        match band.kind {
            BandKind::ThirdOctave => self.entries.get(&scheme.band(band).number).copied(),
            BandKind::Octave => None,
        }
    }

    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let w = self.borderline_width_db;
        if !(w.is_finite() && w > T::zero()) {
            problems.push(format!("borderline width must be positive, got {w}"));
        }
        for (k, v) in &self.entries {
            if !v.is_finite() {
                problems.push(format!("limit for band {k} is not finite"));
            }
        }
        problems
    }
}
