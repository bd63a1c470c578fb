//! Acceptance report: region × band classification of integral levels.

use std::fmt::Write as _;

use serde::Serialize;

use crate::acoustics::{classify, AcceptanceCategory};
use crate::model::{BandKind, Dataset};
use crate::num::{format_sig9, round_sig9, Real};

pub const CSV_HEADER: &str = "region,band_hz,category,excess_db";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry<T> {
    pub region: String,
    /// Nominal band label, e.g. `630` or `oct:500`.
    pub band: String,
    pub center_hz: T,
    pub category: AcceptanceCategory,
    pub integral_level: Option<T>,
    pub integral_limit: Option<T>,
    pub excess: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument<T> {
    pub label: String,
    pub speed_rpm: f64,
    pub content_hash: String,
    pub kind: BandKind,
    /// Every region and band, regions in matrix order.
    pub entries: Vec<ReportEntry<T>>,
    /// Borderline and Unacceptable entries, largest excess first.
    pub findings: Vec<ReportEntry<T>>,
    pub summary: String,
}

impl<T: Real> ReportDocument<T> {
    pub fn build(dataset: &Dataset<T>, kind: BandKind) -> Self {
        let width = dataset.borderline_width();
        let mut entries = Vec::new();
        for region in dataset.partition.ids() {
            for band in dataset.band_ids(kind) {
                let level = dataset.integral_band_level(region, band);
                let limit = dataset.integral_limit(band);
                let category = level.map_or(AcceptanceCategory::Undefined, |l| classify(l, limit, width, 1).category);
                entries.push(ReportEntry {
                    region: dataset.partition.name(region).to_string(),
                    band: dataset.scheme.band_label(band),
                    center_hz: dataset.scheme.band(band).center_hz,
                    category,
                    integral_level: level,
                    integral_limit: limit,
                    excess: dataset.excess(region, band),
                });
            }
        }
        let mut findings: Vec<ReportEntry<T>> = entries
            .iter()
            .filter(|e| matches!(e.category, AcceptanceCategory::Borderline | AcceptanceCategory::Unacceptable))
            .cloned()
            .collect();
        // stable sort keeps matrix order among equal excesses
        findings.sort_by(|a, b| b.excess.partial_cmp(&a.excess).unwrap_or(std::cmp::Ordering::Equal));

        let total: Vec<&ReportEntry<T>> = entries.iter().filter(|e| e.region == crate::model::TOTAL).collect();
        let count = |c: AcceptanceCategory| total.iter().filter(|e| e.category == c).count();
        let (border, unaccept) = (count(AcceptanceCategory::Borderline), count(AcceptanceCategory::Unacceptable));
        let verdict = if unaccept > 0 {
            "FAIL"
        } else if border > 0 {
            "BORDERLINE"
        } else {
            "PASS"
        };
        let summary = format!(
            "{verdict}: TOTAL has {unaccept} unacceptable and {border} borderline band(s); {} finding(s) over all regions",
            findings.len()
        );
        Self {
            label: dataset.meta.label.clone(),
            speed_rpm: dataset.meta.speed_rpm,
            content_hash: dataset.content_hash().to_string(),
            kind,
            entries,
            findings,
            summary,
        }
    }

    /// `region,band_hz,category,excess_db`; the excess is empty when undefined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let excess = e.excess.map(|x| format_sig9(round_sig9(x.as_f64()))).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{}", e.region, e.band, e.category, excess);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dataset {} at {} rpm ({})", self.label, self.speed_rpm, &self.content_hash[..12]);
        let _ = writeln!(out, "{}", self.summary);
        if self.findings.is_empty() {
            let _ = writeln!(out, "no bands above their limits");
            return out;
        }
        let _ = writeln!(out, "findings by excess:");
        for e in &self.findings {
            let f = |v: Option<T>| v.map_or("-".to_string(), |v| format!("{:.2}", v.as_f64()));
            let _ = writeln!(
                out,
                "  {:<10} {:>8} Hz  {:<12} excess {:>+7.2} dB  (level {} dB, limit {} dB)",
                e.region,
                e.band,
                e.category.name(),
                e.excess.map_or(0.0, |x| x.as_f64()),
                f(e.integral_level),
                f(e.integral_limit)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
