use nvh_core::acoustics::{campbell, classify, AcceptanceCategory};
use nvh_core::ingest::{generate_synthetic, SyntheticSpec};
use nvh_core::model::{BandKind, RegionId};
use nvh_core::view::*;
use nvh_core::Dataset;

fn demo() -> Dataset {
    generate_synthetic(&SyntheticSpec::demo()).unwrap()
}

fn params(mode: MatrixMode) -> MatrixParams<f64> {
    MatrixParams { mode, rows: 64, ..Default::default() }
}

#[test]
fn matrix_shape_and_row_heights() {
    let d = demo();
    let m = matrix_overview(&d, &params(MatrixMode::Limits));
    assert_eq!(m.rows.len(), 7);
    assert_eq!(m.columns.len(), 26);
    assert_eq!(m.rows[0].region, "TOTAL");
    assert_eq!(m.rows[0].height_fraction, 1.0);
    let sum: f64 = m.rows[1..].iter().map(|r| r.height_fraction).sum();
    assert!((sum - 1.0).abs() < 1e-9);
    for (row, region) in m.rows.iter().zip(d.partition.ids()) {
        assert!((row.height_fraction - d.region_area(region) / d.total_area()).abs() < 1e-9);
    }
    assert!(m.columns.windows(2).all(|w| w[0].center_hz < w[1].center_hz));
}

#[test]
fn limits_mode_flags_only_planted_bands() {
    let d = demo();
    let m = matrix_overview(&d, &params(MatrixMode::Limits));
    let bottom = d.partition.find("BOTTOM").unwrap();
    for (j, col) in m.columns.iter().enumerate() {
        let cat = m.cell(bottom, j).acceptance.category;
        match (col.integral_limit, col.label.as_str()) {
            (None, _) => assert_eq!(cat, AcceptanceCategory::Undefined),
            (Some(_), "500") | (Some(_), "630") => assert_ne!(cat, AcceptanceCategory::Acceptable, "{}", col.label),
            (Some(_), _) => assert_eq!(cat, AcceptanceCategory::Acceptable, "{}", col.label),
        }
    }
}

#[test]
fn uniform_dataset_is_one_category() {
    let d: Dataset = generate_synthetic(&SyntheticSpec::default()).unwrap();
    let m = matrix_overview(&d, &params(MatrixMode::Limits));
    let grid = category_grid(&m);
    for (j, col) in m.columns.iter().enumerate() {
        for row in &grid {
            let expected = if col.integral_limit.is_some() { AcceptanceCategory::Acceptable } else { AcceptanceCategory::Undefined };
            assert_eq!(row[j], expected);
        }
    }
}

#[test]
fn every_mode_keeps_total_row_equal_to_campbell() {
    let d = demo();
    let row = campbell(&[&d], BandKind::ThirdOctave).unwrap().rows.remove(0);
    for mode in MatrixMode::ALL {
        let m = matrix_overview(&d, &params(mode));
        assert_eq!(m.total_row_levels(), row, "{}", mode.name());
        for r in &m.rows {
            for c in &r.cells {
                match &c.payload {
                    CellPayload::Flat { .. } => {}
                    CellPayload::TwoTone { stripes } | CellPayload::Ranked { stripes } | CellPayload::Raw { stripes } => {
                        assert!((stripes.total() - 1.0).abs() < 1e-9)
                    }
                    CellPayload::Combined { left, right } => {
                        assert!((left.total() - 1.0).abs() < 1e-9 && (right.total() - 1.0).abs() < 1e-9)
                    }
                }
            }
        }
    }
}

#[test]
fn campbell_argmax_at_planted_band() {
    let spec = SyntheticSpec::scenario(10, &[(630.0, 8.0)], 0.5);
    let d: Dataset = generate_synthetic(&spec).unwrap();
    let other: Dataset = generate_synthetic(&SyntheticSpec { speed_rpm: 2000.0, label: "copy".into(), ..spec }).unwrap();
    let c = campbell(&[&d, &other], BandKind::ThirdOctave).unwrap();
    assert_eq!(c.rows[0], c.rows[1]);
    let limited: Vec<usize> = d
        .band_ids(BandKind::ThirdOctave)
        .into_iter()
        .filter(|&b| d.integral_limit(b).is_some())
        .map(|b| b.pos)
        .collect();
    let best = limited.iter().copied().max_by(|&a, &b| c.rows[0][a].partial_cmp(&c.rows[0][b]).unwrap()).unwrap();
    assert_eq!(c.columns[best], "630");
}

#[test]
fn discrete_mode_colors_by_discrete_classification() {
    let d = demo();
    let m = matrix_overview(&d, &params(MatrixMode::DiscreteLimits));
    let bottom = d.partition.find("BOTTOM").unwrap();
    let j = m.columns.iter().position(|c| c.label == "500").unwrap();
    let CellPayload::Ranked { stripes } = &m.cell(bottom, j).payload else { panic!("ranked payload expected") };
    let above = stripes.fraction_of(AcceptanceCategory::Borderline) + stripes.fraction_of(AcceptanceCategory::Unacceptable);
    assert!((above - 0.6).abs() < 0.02, "{above}");
    assert_eq!(stripes.stripes[0].token.category(), Some(AcceptanceCategory::Acceptable));
}

#[test]
fn unknown_mode_is_an_error() {
    assert!("limits".parse::<MatrixMode>().is_ok());
    assert_eq!("sparkle".parse::<MatrixMode>(), Err(ViewError::UnknownMode("sparkle".into())));
}

#[test]
fn harmonics_pane_modes() {
    let d = demo();
    let band = d.scheme.band_by_label("630").unwrap();
    let harmonics = d.scheme.band(band).harmonics.clone();
    let mut p = HarmonicsParams::new(RegionId::TOTAL, PaneBand::Band(band));
    p.rows = 128;
    let individual = harmonics_pane(&d, &p).unwrap();
    assert_eq!(individual.columns.len(), harmonics.len());
    for col in &individual.columns {
        assert_eq!(col.values.len(), 128);
        let v: Vec<f64> = col.values.iter().map(|v| v.unwrap()).collect();
        assert!(v.windows(2).all(|w| w[0] >= w[1]));
    }

    p.sort = SortMode::BySelection;
    assert_eq!(harmonics_pane(&d, &p).unwrap_err(), ViewError::AnchorRequired);
    p.anchor = Some(0);
    assert!(matches!(harmonics_pane(&d, &p).unwrap_err(), ViewError::AnchorOutsideBand { .. }));
    p.anchor = Some(harmonics[1]);
    let shared = harmonics_pane(&d, &p).unwrap();
    let anchor_col = shared.column(harmonics[1]).unwrap();
    assert_eq!(anchor_col.values, individual.column(harmonics[1]).unwrap().values);
    assert!(shared.columns.iter().all(|c| c.contributors == anchor_col.contributors));
    assert_ne!(shared.layout_id, individual.layout_id);
}

#[test]
fn single_harmonic_band_has_one_column() {
    let d = demo();
    let band = d
        .band_ids(BandKind::ThirdOctave)
        .into_iter()
        .find(|&b| d.scheme.band(b).harmonics.len() == 1)
        .expect("demo has a one-harmonic band");
    let pane = harmonics_pane(&d, &HarmonicsParams::new(RegionId::TOTAL, PaneBand::Band(band))).unwrap();
    assert_eq!(pane.columns.len(), 1);
    assert_eq!(pane.columns[0].values.len(), DEFAULT_PANE_ROWS);
}

#[test]
fn out_of_band_harmonics_have_a_pane() {
    let spec = SyntheticSpec { bands_hz: [250.0, 1000.0], ..SyntheticSpec::demo() };
    let d: Dataset = generate_synthetic(&spec).unwrap();
    let pane = harmonics_pane(&d, &HarmonicsParams::new(RegionId::TOTAL, PaneBand::OutOfBand)).unwrap();
    assert_eq!(pane.columns.len(), d.scheme.out_of_band().len());
    assert_eq!(pane.band, "out-of-band");
}

#[test]
fn critical_harmonics_are_loudest_first() {
    let d = demo();
    let band = PaneBand::Band(d.scheme.band_by_label("500").unwrap());
    let top = critical_harmonics(&d, band, 3);
    assert_eq!(top.len(), 3);
    let level = |h| d.integral_harmonic_level(RegionId::TOTAL, h).unwrap();
    assert!(level(top[0]) >= level(top[1]) && level(top[1]) >= level(top[2]));
}

#[test]
fn details_pane_bars() {
    let d = demo();
    let bottom = d.partition.find("BOTTOM").unwrap();
    let band = d.scheme.band_by_label("500").unwrap();
    let mut p = DetailsParams::new(bottom, band);
    p.top_pct = 100.0;
    p.abs_threshold = 1000.0;
    let pane = details_pane(&d, &p).unwrap();
    assert_eq!(pane.bars[1].coverage, pane.bars[0].coverage);
    assert_eq!(pane.bars[1].stripes, pane.bars[0].stripes);
    assert!(pane.bars[2].stripes.is_empty());
    assert_eq!(pane.bars[2].coverage, 0.0);

    let width = d.borderline_width();
    let limit = d.discrete_limit(band);
    let mut above = 0.0;
    for &c in d.region_cells(bottom) {
        let cat = classify(d.cell_band_level(c, band).unwrap(), limit, width, 1).category;
        if cat != AcceptanceCategory::Acceptable {
            above += d.areas()[c];
        }
    }
    let brute = above / d.region_area(bottom);
    let f = &pane.summary.category_fractions;
    assert!((f.above_limit() - brute).abs() < 1e-9);
    assert!((pane.bars[3].stripes.fraction_of(AcceptanceCategory::Acceptable) - f.acceptable).abs() < 1e-9);
    assert!((f.above_limit() - 0.6).abs() < 0.01);
    assert_eq!(pane.summary.excess, d.excess(bottom, band));

    p.top_pct = 25.0;
    let top = details_pane(&d, &p).unwrap();
    assert!(top.bars[1].coverage >= 0.25 && top.bars[1].coverage < 0.25 + 0.05);
}

#[test]
fn uniform_details_have_one_category() {
    let d: Dataset = generate_synthetic(&SyntheticSpec::default()).unwrap();
    let band = d.scheme.band_by_label("500").unwrap();
    let mut p = DetailsParams::new(RegionId::TOTAL, band);
    p.abs_threshold = 200.0;
    let pane = details_pane(&d, &p).unwrap();
    assert_eq!(pane.bars[3].stripes.stripes.len(), 1);
    assert!(pane.bars[2].stripes.is_empty());
}

#[test]
fn boxplots_split_and_union() {
    let d = demo();
    let bands = [d.scheme.band_by_label("500").unwrap(), d.scheme.band_by_label("1000").unwrap()];
    let regions: Vec<RegionId> = d.partition.ids().skip(1).collect();
    let split = boxplot_stats(&d, &bands, &regions, true, 10).unwrap();
    assert_eq!(split.len(), 12);
    let union = boxplot_stats(&d, &bands, &regions, false, 10).unwrap();
    assert_eq!(union.len(), 2);
    assert_eq!(union[0].cell_count, d.cell_count());
    let s = union[0].stats.as_ref().unwrap();
    assert!(s.q1 <= s.median && s.median <= s.q3 && s.whisker_low <= s.q1 && s.q3 <= s.whisker_high);
    assert_eq!(s.histogram.counts.iter().sum::<usize>(), d.cell_count());
    assert_eq!(union[0].limit_stripes.len(), 3);
    assert_eq!(union[0].limit_stripes[1].low, d.discrete_limit(bands[0]));
    assert!(boxplot_stats(&d, &bands, &regions, false, 0).is_err());
}
