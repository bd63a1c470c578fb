//! Stripe lists and two-tone pseudo coloring.

use serde::Serialize;

use crate::acoustics::{classify, AcceptanceCategory};
use crate::num::Real;

use super::palette::ColorToken;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stripe<T> {
    pub token: ColorToken,
    pub fraction: T,
}

/// Colored partition of a cell or bar, listed from the low-dB end.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripeList<T> {
    pub stripes: Vec<Stripe<T>>,
}

impl<T: Real> StripeList<T> {
    pub fn solid(token: ColorToken) -> Self {
        Self { stripes: vec![Stripe { token, fraction: T::one() }] }
    }

    pub fn empty() -> Self {
        Self { stripes: Vec::new() }
    }

    /// Builds a list from `(token, weight)` pairs in low-dB-first order:
    /// zero weights are dropped, neighbours with equal tokens merged, and
    /// weights normalized by their total.
    pub fn from_weights(items: impl IntoIterator<Item = (ColorToken, T)>) -> Self {
        let mut merged: Vec<(ColorToken, T)> = Vec::new();
        for (token, w) in items {
            if !(w > T::zero()) {
                continue;
            }
            match merged.last_mut() {
                Some((t, acc)) if *t == token => *acc = *acc + w,
                _ => merged.push((token, w)),
            }
        }
        let total: T = merged.iter().map(|&(_, w)| w).sum();
        Self { stripes: merged.into_iter().map(|(token, w)| Stripe { token, fraction: w / total }).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.stripes.is_empty()
    }

    pub fn total(&self) -> T {
        self.stripes.iter().map(|s| s.fraction).sum()
    }

    pub fn tokens(&self) -> Vec<ColorToken> {
        self.stripes.iter().map(|s| s.token).collect()
    }

    /// Fraction per acceptance category (shades summed), in category order.
    pub fn category_fractions(&self) -> Vec<(AcceptanceCategory, T)> {
        let mut out: Vec<(AcceptanceCategory, T)> = Vec::new();
        for s in &self.stripes {
            let Some(cat) = s.token.category() else { continue };
            match out.iter_mut().find(|(c, _)| *c == cat) {
                Some((_, f)) => *f = *f + s.fraction,
                None => out.push((cat, s.fraction)),
            }
        }
        out.sort_by_key(|(c, _)| *c);
        out
    }

    pub fn fraction_of(&self, category: AcceptanceCategory) -> T {
        self.category_fractions().into_iter().find(|(c, _)| *c == category).map_or(T::zero(), |(_, f)| f)
    }

    /// Compact textual form `TOKEN:fraction;TOKEN:fraction`.
    pub fn describe(&self) -> String {
        self.stripes
            .iter()
            .map(|s| format!("{}:{}", s.token, crate::num::format_sig9(crate::num::round_sig9(s.fraction.as_f64()))))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Two-tone encoding of `level`: the cell shows the dB window
/// `[level − w/2, level + w/2]` cut at every category and shade boundary, so
/// the split between tones sits `limit − level` away from mid-cell.
///
/// Without a limit the result is one `UNDEFINED` stripe.
pub fn two_tone_stripes<T: Real>(level: T, limit: Option<T>, width: T, shades: u8) -> StripeList<T> {
    let Some(limit) = limit else {
        return StripeList::solid(ColorToken::Undefined);
    };
    let shades = shades.max(1);
    let half = width / T::lit(2.0);
    let (lo, hi) = (level - half, level + half);
    let step = width / T::lit(f64::from(shades));
    let mut cuts = vec![lo];
    for k in 1..3 * u32::from(shades) {
        let edge = limit - width + step * T::lit(f64::from(k));
        if edge > lo && edge < hi {
            cuts.push(edge);
        }
    }
    cuts.push(hi);
    StripeList::from_weights(cuts.windows(2).map(|w| {
        let mid = (w[0] + w[1]) / T::lit(2.0);
        (ColorToken::from_acceptance(classify(mid, Some(limit), width, shades)), w[1] - w[0])
    }))
}
