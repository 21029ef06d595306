use pitchmbc::ingest::*;
use pitchmbc::core::{filter_pitches, PitchRecord};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn three_rows_in_file_order() {
    let src = "pitcher_id,start_speed,back_spin,side_spin\nz,91.2,150,-40\nz,75.5,-80,60\nz,83,60,-45\n";
    let (ds, bad) = parse_pitch_csv(src.as_bytes(), &Schema::default()).unwrap();
    assert!(bad.is_empty());
    let speeds: Vec<f64> = ds.records().iter().map(|r| r.start_speed).collect();
    assert_eq!(speeds, vec![91.2, 75.5, 83.0]);
}

#[test]
fn lone_nan_row_is_an_empty_dataset() {
    let src = "pitcher_id,start_speed,back_spin,side_spin\nz,NaN,150,-40\n";
    match parse_pitch_csv(src.as_bytes(), &Schema::default()) {
        Err(IngestError::EmptyDataset { malformed }) => {
            assert_eq!(malformed.len(), 1);
            assert_eq!(malformed[0].line, 2);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn column_means_match_generated_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut text = String::from("pitcher_id,season,start_speed,back_spin,side_spin,pitch_type,intentional\n");
    let mut sums = [0.0f64; 3];
    let rows: Vec<[f64; 3]> = (0..100)
        .map(|_| [rng.random_range(70.0..98.0), rng.random_range(-150.0..250.0), rng.random_range(-150.0..150.0)])
        .collect();
    for r in &rows {
        text += &format!("p,2011,{},{},{},FF,0\n", r[0], r[1], r[2]);
        for d in 0..3 {
            sums[d] += r[d];
        }
    }
    let (ds, _) = parse_pitch_csv(text.as_bytes(), &Schema::default()).unwrap();
    let means = ds.column_means();
    for d in 0..3 {
        assert!((means[d] - sums[d] / 100.0).abs() <= 1e-12 * (sums[d] / 100.0).abs().max(1.0));
    }
}

#[test]
fn intentional_balls_are_filtered_after_parsing() {
    let src = "pitcher_id,start_speed,back_spin,side_spin,intentional\nz,90,1,1,0\nz,80,1,1,1\nz,85,1,1,0\n";
    let (ds, _) = parse_pitch_csv(src.as_bytes(), &Schema::default()).unwrap();
    let out = filter_pitches(ds).unwrap();
    assert_eq!((out.dataset.len(), out.removed), (2, 1));
}

fn record() -> impl Strategy<Value = PitchRecord> {
    (
        "[a-z0-9]{1,6}",
        0.001f64..199.999,
        prop::num::f64::NORMAL,
        prop::num::f64::NORMAL | prop::num::f64::ZERO,
        prop::option::of("20[0-9]{2}"),
        prop::option::of("[A-Z]{2}"),
        any::<bool>(),
    )
        .prop_map(|(pitcher_id, start_speed, back_spin, side_spin, season, reference_label, is_intentional_ball)| {
            PitchRecord { pitcher_id, start_speed, back_spin, side_spin, season, reference_label, is_intentional_ball }
        })
}

proptest! {
    #[test]
    fn write_then_read_is_identity(records in prop::collection::vec(record(), 1..30), semicolon in any::<bool>()) {
        let schema = Schema { delimiter: if semicolon { ';' } else { ',' }, ..Schema::default() };
        let mut buf = Vec::new();
        write_pitch_csv(&mut buf, &records, &schema).unwrap();
        let table = read_pitch_table(buf.as_slice(), &schema).unwrap();
        prop_assert!(table.malformed.is_empty());
        prop_assert_eq!(&table.records, &records);
        let mut again = Vec::new();
        write_pitch_csv(&mut again, &table.records, &schema).unwrap();
        prop_assert_eq!(buf, again);
    }
}
