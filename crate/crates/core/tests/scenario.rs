use std::time::Instant;

use nvh_core::acoustics::{campbell, AcceptanceCategory};
use nvh_core::ingest::{generate_synthetic, SyntheticSpec};
use nvh_core::model::BandKind;
use nvh_core::report::ReportDocument;
use nvh_core::view::{details_pane, matrix_overview, DetailsParams, MatrixMode, MatrixParams};
use nvh_core::Dataset;

#[test]
fn planted_hotspots_end_to_end() {
    let start = Instant::now();
    let spec = SyntheticSpec::scenario(45, &[(500.0, 5.4), (630.0, 5.7)], 0.6);
    let d: Dataset = generate_synthetic(&spec).unwrap();
    assert_eq!(d.cell_count(), 12_150);

    let report = ReportDocument::build(&d, BandKind::ThirdOctave);
    let flagged: Vec<(&str, &str, f64)> =
        report.findings.iter().map(|e| (e.region.as_str(), e.band.as_str(), e.excess.unwrap())).collect();
    assert_eq!(flagged.len(), 4, "{flagged:?}");
    assert!(report.findings.iter().all(|e| e.category == AcceptanceCategory::Borderline));
    let excess = |region: &str, band: &str| flagged.iter().find(|f| f.0 == region && f.1 == band).unwrap().2;
    assert!((excess("TOTAL", "500") - 5.4).abs() <= 0.05);
    assert!((excess("TOTAL", "630") - 5.7).abs() <= 0.05);
    assert!(flagged.iter().all(|f| f.0 == "TOTAL" || f.0 == "BOTTOM"));
    assert!(report.summary.starts_with("BORDERLINE"));

    let bottom = d.partition.find("BOTTOM").unwrap();
    for label in ["500", "630"] {
        let band = d.scheme.band_by_label(label).unwrap();
        let pane = details_pane(&d, &DetailsParams::new(bottom, band)).unwrap();
        let above = 1.0 - pane.bars[3].stripes.fraction_of(AcceptanceCategory::Acceptable);
        assert!((above - 0.60).abs() <= 0.01, "{label}: {above}");
    }

    let row = campbell(&[&d], BandKind::ThirdOctave).unwrap().rows.remove(0);
    let m = matrix_overview(&d, &MatrixParams { mode: MatrixMode::Combined, ..Default::default() });
    assert_eq!(m.total_row_levels(), row);
    eprintln!("scenario runtime {:?}", start.elapsed());
}
