//! Frequency hierarchy: harmonics, one-third octave bands, octave bands.
//!
//! Bands are numbered relative to 1 kHz: third-octave band `k` has exact
//! center `1000 * 2^(k/3)` and edges `1000 * 2^((2k ± 1)/6)`; octave band `m`
//! has center `1000 * 2^m` and contains thirds `3m - 1 ..= 3m + 1`. Band edges
//! are evaluated from integer exponents so adjacent bands share bit-identical
//! edges. Display labels use the preferred nominal values (500, 630, 31.5 ...).

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::Real;

pub type HarmonicId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandKind {
    ThirdOctave,
    Octave,
}

/// Position of a band within a scheme's band list of the given kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BandId {
    pub kind: BandKind,
    pub pos: usize,
}

impl BandId {
    pub fn third(pos: usize) -> Self {
        Self { kind: BandKind::ThirdOctave, pos }
    }

    pub fn octave(pos: usize) -> Self {
        Self { kind: BandKind::Octave, pos }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Band<T> {
    pub kind: BandKind,
    /// Band number relative to 1 kHz.
    pub number: i32,
    pub label: String,
    pub center_hz: T,
    pub lower_hz: T,
    pub upper_hz: T,
    /// Harmonics whose frequency lies in `[lower_hz, upper_hz)`, ascending.
    pub harmonics: Vec<HarmonicId>,
}

impl<T: Real> Band<T> {
    pub fn contains(&self, f: T) -> bool {
        self.lower_hz <= f && f < self.upper_hz
    }
}

impl<T> fmt::Display for Band<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BandKind::ThirdOctave => write!(f, "{} Hz 1/3 octave", self.label),
            BandKind::Octave => write!(f, "{} Hz octave", self.label),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("fundamental frequency must be positive, got {0}")]
    Fundamental(f64),
    #[error("harmonic {index} has invalid frequency {hz}")]
    BadHarmonic { index: usize, hz: f64 },
    #[error("harmonic frequencies must be strictly ascending (harmonic {index})")]
    NotAscending { index: usize },
    #[error("empty band range")]
    EmptyRange,
}

/// Preferred-number mantissas of the one-third octave series (times 100).
const R10: [u32; 10] = [100, 125, 160, 200, 250, 315, 400, 500, 630, 800];

/// Nominal label and value of third-octave band `k`.
pub fn nominal_third(k: i32) -> (String, f64) {
    let mantissa = R10[k.rem_euclid(10) as usize];
    // 1 kHz = 100 * 10^1
    let exp = k.div_euclid(10) + 1;
    let value = mantissa as f64 * 10f64.powi(exp);
    let label = if exp >= 0 {
        format!("{}", mantissa as u64 * 10u64.pow(exp as u32))
    } else {
        let digits = (-exp) as usize;
        let s = format!("{:0>width$}", mantissa, width = digits + 1);
        let (int, frac) = s.split_at(s.len() - digits);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    (label, value)
}

/// `1000 * 2^(sixths/6)` Hz.
fn edge_hz<T: Real>(sixths: i32) -> T {
    T::lit(1000.0) * T::lit(2.0).powf(T::lit(sixths as f64 / 6.0))
}

fn third_band<T: Real>(k: i32) -> Band<T> {
    Band {
        kind: BandKind::ThirdOctave,
        number: k,
        label: nominal_third(k).0,
        center_hz: T::lit(1000.0) * T::lit(2.0).powf(T::lit(k as f64 / 3.0)),
        lower_hz: edge_hz(2 * k - 1),
        upper_hz: edge_hz(2 * k + 1),
        harmonics: Vec::new(),
    }
}

fn octave_band<T: Real>(m: i32) -> Band<T> {
    Band {
        kind: BandKind::Octave,
        number: m,
        label: nominal_third(3 * m).0,
        center_hz: T::lit(1000.0) * T::lit(2.0).powi(m),
        lower_hz: edge_hz(6 * m - 3),
        upper_hz: edge_hz(6 * m + 3),
        harmonics: Vec::new(),
    }
}

/// Third-octave band number whose nominal value is `hz` (e.g. 630 -> -2).
pub fn third_number_for_nominal(hz: f64) -> Option<i32> {
    if !(hz.is_finite() && hz > 0.0) {
        return None;
    }
    let k = (3.0 * (hz / 1000.0).log2()).round() as i32;
    let (_, nominal) = nominal_third(k);
    ((hz / nominal - 1.0).abs() < 0.03).then_some(k)
}

fn octave_of_third(k: i32) -> i32 {
    (k + 1).div_euclid(3)
}

/// Harmonic frequencies and their assignment to the band hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyScheme<T> {
    pub fundamental_hz: T,
    pub harmonics_hz: Vec<T>,
    thirds: Vec<Band<T>>,
    octaves: Vec<Band<T>>,
    third_of_harmonic: Vec<Option<usize>>,
    /// Octave position of every third position.
    octave_of_third: Vec<usize>,
}

impl<T: Real> FrequencyScheme<T> {
    /// Builds a scheme over the third-octave bands numbered `thirds`.
    pub fn new(
        fundamental_hz: T,
        harmonics_hz: Vec<T>,
        thirds: RangeInclusive<i32>,
    ) -> Result<Self, SchemeError> {
        if let Some(err) = Self::check(fundamental_hz, &harmonics_hz).into_iter().next() {
            return Err(err);
        }
        if thirds.is_empty() {
            return Err(SchemeError::EmptyRange);
        }
        let mut third_bands: Vec<Band<T>> = thirds.clone().map(third_band).collect();
        let first = *thirds.start();
        let mut third_of_harmonic = vec![None; harmonics_hz.len()];
        for (h, &f) in harmonics_hz.iter().enumerate() {
            let guess = (T::lit(3.0) * (f / T::lit(1000.0)).log2()).round().to_i32().unwrap_or(i32::MIN);
            for k in [guess - 1, guess, guess + 1] {
                if !thirds.contains(&k) {
                    continue;
                }
                let pos = (k - first) as usize;
                if third_bands[pos].contains(f) {
                    third_bands[pos].harmonics.push(h);
                    third_of_harmonic[h] = Some(pos);
                    break;
                }
            }
        }
        let first_octave = octave_of_third(first);
        let last_octave = octave_of_third(*thirds.end());
        let mut octaves: Vec<Band<T>> = (first_octave..=last_octave).map(octave_band).collect();
        let mut octave_of_third_pos = Vec::with_capacity(third_bands.len());
        for band in &third_bands {
            let pos = (octave_of_third(band.number) - first_octave) as usize;
            octave_of_third_pos.push(pos);
            octaves[pos].harmonics.extend_from_slice(&band.harmonics);
        }
        Ok(Self {
            fundamental_hz,
            harmonics_hz,
            thirds: third_bands,
            octaves,
            third_of_harmonic,
            octave_of_third: octave_of_third_pos,
        })
    }

    /// Scheme whose third-octave range spans nominal band values `lo ..= hi`.
    pub fn with_nominal_range(
        fundamental_hz: T,
        harmonics_hz: Vec<T>,
        lo_hz: f64,
        hi_hz: f64,
    ) -> Result<Self, SchemeError> {
        let lo = third_number_for_nominal(lo_hz).ok_or(SchemeError::EmptyRange)?;
        let hi = third_number_for_nominal(hi_hz).ok_or(SchemeError::EmptyRange)?;
        Self::new(fundamental_hz, harmonics_hz, lo..=hi)
    }

    /// Scheme whose third-octave range covers every harmonic.
    pub fn spanning(fundamental_hz: T, harmonics_hz: Vec<T>) -> Result<Self, SchemeError> {
        if let Some(err) = Self::check(fundamental_hz, &harmonics_hz).into_iter().next() {
            return Err(err);
        }
        let number = |f: T| (T::lit(3.0) * (f / T::lit(1000.0)).log2()).round().to_i32().unwrap_or(0);
        let range = match (harmonics_hz.first(), harmonics_hz.last()) {
            (Some(&lo), Some(&hi)) => (number(lo) - 1)..=(number(hi) + 1),
            _ => 0..=0,
        };
        let mut scheme = Self::new(fundamental_hz, harmonics_hz, range)?;
        // trim empty bands at the ends
        let first = scheme.thirds.iter().position(|b| !b.harmonics.is_empty());
        let last = scheme.thirds.iter().rposition(|b| !b.harmonics.is_empty());
        if let (Some(a), Some(b)) = (first, last) {
            let range = scheme.thirds[a].number..=scheme.thirds[b].number;
            scheme = Self::new(scheme.fundamental_hz, scheme.harmonics_hz, range)?;
        }
        Ok(scheme)
    }

    /// Invariant violations of the raw inputs.
    pub fn check(fundamental_hz: T, harmonics_hz: &[T]) -> Vec<SchemeError> {
        let mut errors = Vec::new();
        if !(fundamental_hz.is_finite() && fundamental_hz > T::zero()) {
            errors.push(SchemeError::Fundamental(fundamental_hz.as_f64()));
        }
        for (index, &hz) in harmonics_hz.iter().enumerate() {
            if !(hz.is_finite() && hz > T::zero()) {
                errors.push(SchemeError::BadHarmonic { index, hz: hz.as_f64() });
            } else if index > 0 && harmonics_hz[index - 1] >= hz {
                errors.push(SchemeError::NotAscending { index });
            }
        }
        errors
    }

    pub fn harmonic_count(&self) -> usize {
        self.harmonics_hz.len()
    }

    pub fn bands(&self, kind: BandKind) -> &[Band<T>] {
        match kind {
            BandKind::ThirdOctave => &self.thirds,
            BandKind::Octave => &self.octaves,
        }
    }

    pub fn band(&self, id: BandId) -> &Band<T> {
        &self.bands(id.kind)[id.pos]
    }

    pub fn band_ids(&self, kind: BandKind) -> impl Iterator<Item = BandId> + '_ {
        (0..self.bands(kind).len()).map(move |pos| BandId { kind, pos })
    }

    pub fn third_range(&self) -> RangeInclusive<i32> {
        self.thirds[0].number..=self.thirds[self.thirds.len() - 1].number
    }

    /// Third-octave position of a harmonic, `None` when out of band.
    pub fn third_of_harmonic(&self, h: HarmonicId) -> Option<usize> {
        self.third_of_harmonic[h]
    }

    pub fn band_of_harmonic(&self, h: HarmonicId, kind: BandKind) -> Option<BandId> {
        let third = self.third_of_harmonic[h]?;
        Some(match kind {
            BandKind::ThirdOctave => BandId::third(third),
            BandKind::Octave => BandId::octave(self.octave_of_third[third]),
        })
    }

    /// Third-octave positions forming an octave position.
    pub fn thirds_in_octave(&self, octave_pos: usize) -> Vec<usize> {
        (0..self.thirds.len()).filter(|&t| self.octave_of_third[t] == octave_pos).collect()
    }

    /// Harmonics not assigned to any band.
    pub fn out_of_band(&self) -> Vec<HarmonicId> {
        (0..self.harmonics_hz.len()).filter(|&h| self.third_of_harmonic[h].is_none()).collect()
    }

    pub fn third_by_number(&self, k: i32) -> Option<BandId> {
        let first = self.thirds[0].number;
        let pos = usize::try_from(k - first).ok()?;
        (pos < self.thirds.len()).then_some(BandId::third(pos))
    }

    /// Resolves a band label such as `630` (third octave) or `oct:500` (octave).
    pub fn band_by_label(&self, label: &str) -> Option<BandId> {
        let label = label.trim();
        let (kind, value) = match label.strip_prefix("oct:") {
            Some(rest) => (BandKind::Octave, rest),
            None => (BandKind::ThirdOctave, label.strip_prefix("third:").unwrap_or(label)),
        };
        let hz: f64 = value.parse().ok()?;
        let k = third_number_for_nominal(hz)?;
        match kind {
            BandKind::ThirdOctave => self.third_by_number(k),
            BandKind::Octave => {
                if k.rem_euclid(3) != 0 {
                    return None;
                }
                let m = k / 3;
                let pos = self.octaves.iter().position(|b| b.number == m)?;
                Some(BandId::octave(pos))
            }
        }
    }

    /// Label that `band_by_label` resolves back to `id`.
    pub fn band_label(&self, id: BandId) -> String {
        let band = self.band(id);
        match id.kind {
            BandKind::ThirdOctave => band.label.clone(),
            BandKind::Octave => format!("oct:{}", band.label),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_orders(rpm: f64, max_hz: f64) -> Vec<f64> {
        let f0 = rpm / 60.0;
        (1..).map(|j| j as f64 * 0.5 * f0).take_while(|&f| f <= max_hz).collect()
    }

    #[test]
    fn nominal_labels() {
        assert_eq!(nominal_third(0).0, "1000");
        assert_eq!(nominal_third(-2).0, "630");
        assert_eq!(nominal_third(-3).0, "500");
        assert_eq!(nominal_third(-15).0, "31.5");
        assert_eq!(nominal_third(-19).0, "12.5");
        assert_eq!(nominal_third(5).0, "3150");
        assert_eq!(nominal_third(-30).0, "1");
        assert_eq!(nominal_third(-31).0, "0.8");
        assert_eq!(third_number_for_nominal(630.0), Some(-2));
        assert_eq!(third_number_for_nominal(31.5), Some(-15));
        assert_eq!(third_number_for_nominal(700.0), None);
    }

    #[test]
    fn edges_are_contiguous_and_bands_disjoint() {
        let scheme = FrequencyScheme::new(33.3f64, vec![], -19..=6).unwrap();
        let thirds = scheme.bands(BandKind::ThirdOctave);
        assert_eq!(thirds.len(), 26);
        for w in thirds.windows(2) {
            assert_eq!(w[0].upper_hz.to_bits(), w[1].lower_hz.to_bits());
            assert!(w[0].center_hz < w[1].center_hz);
        }
        let b500 = &thirds[(-3 + 19) as usize];
        assert!((b500.lower_hz - 500.0 * 2f64.powf(-1.0 / 6.0)).abs() < 1e-9);
        assert!((b500.upper_hz - 500.0 * 2f64.powf(1.0 / 6.0)).abs() < 1e-9);
        let octaves = scheme.bands(BandKind::Octave);
        for w in octaves.windows(2) {
            assert_eq!(w[0].upper_hz.to_bits(), w[1].lower_hz.to_bits());
        }
    }

    #[test]
    fn every_harmonic_inside_its_band() {
        let harmonics = half_orders(2000.0, 4000.0);
        let scheme = FrequencyScheme::new(2000.0 / 60.0, harmonics.clone(), -19..=6).unwrap();
        for (h, &f) in harmonics.iter().enumerate() {
            for kind in [BandKind::ThirdOctave, BandKind::Octave] {
                let band = scheme.band(scheme.band_of_harmonic(h, kind).unwrap());
                assert!(band.contains(f), "{f} not in {band}");
            }
        }
        // each harmonic counted exactly once per level
        for kind in [BandKind::ThirdOctave, BandKind::Octave] {
            let total: usize = scheme.bands(kind).iter().map(|b| b.harmonics.len()).sum();
            assert_eq!(total, harmonics.len());
        }
        let b500 = scheme.band(scheme.band_by_label("500").unwrap());
        assert_eq!(b500.harmonics.len(), 7);
    }

    #[test]
    fn out_of_band_harmonics_are_flagged() {
        let harmonics = vec![100.0, 500.0, 5000.0];
        let scheme = FrequencyScheme::new(10.0, harmonics, -3..=0).unwrap();
        assert_eq!(scheme.out_of_band(), vec![0, 2]);
        assert_eq!(scheme.third_of_harmonic(1), Some(0));
    }

    #[test]
    fn octave_contains_its_three_thirds() {
        let scheme = FrequencyScheme::new(10.0f64, vec![], -19..=6).unwrap();
        let oct = scheme.band_by_label("oct:500").unwrap();
        let thirds: Vec<_> = scheme
            .thirds_in_octave(oct.pos)
            .into_iter()
            .map(|t| scheme.bands(BandKind::ThirdOctave)[t].label.clone())
            .collect();
        assert_eq!(thirds, ["400", "500", "630"]);
        assert_eq!(scheme.band_label(oct), "oct:500");
        assert!(scheme.band_by_label("oct:630").is_none());
    }

    #[test]
    fn spanning_trims_to_occupied_bands() {
        let scheme = FrequencyScheme::spanning(10.0f64, vec![480.0, 990.0]).unwrap();
        let labels: Vec<_> = scheme.bands(BandKind::ThirdOctave).iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, ["500", "630", "800", "1000"]);
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            FrequencyScheme::new(0.0f64, vec![], 0..=0),
            Err(SchemeError::Fundamental(_))
        ));
        assert!(matches!(
            FrequencyScheme::new(1.0f64, vec![2.0, 2.0], 0..=0),
            Err(SchemeError::NotAscending { index: 1 })
        ));
    }
}
