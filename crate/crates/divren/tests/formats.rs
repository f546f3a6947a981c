use divren::formats::{parse_csv, Cell, CsvTable, SeriesFile};
use divren_core::series::AsymptoticSeries;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..1e6,
        (-300i32..300, -9.99f64..9.99).prop_map(|(e, m)| m * 10f64.powi(e)),
        Just(0.0),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_file_roundtrip_is_exact(values in prop::collection::vec(finite(), 1..40)) {
        let s = AsymptoticSeries::from_values(&values).unwrap();
        let text = serde_json::to_string(&SeriesFile::from(&s)).unwrap();
        let back: SeriesFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_series().unwrap(), s);
    }

    #[test]
    fn csv_roundtrip_is_exact(rows in prop::collection::vec((0usize..1000, finite(), finite()), 0..30)) {
        let mut t = CsvTable::new(vec!["N".into(), "a".into(), "b".into()]);
        t.meta.insert("schema".into(), "probe".into());
        for &(n, a, b) in &rows {
            t.push(vec![Cell::from(n), a.into(), b.into()]);
        }
        let text = t.render();
        prop_assert_eq!(&text, &t.render());
        let (meta, cols, parsed) = parse_csv(&text).unwrap();
        prop_assert_eq!(&meta["schema"], "probe");
        prop_assert_eq!(cols, vec!["N", "a", "b"]);
        prop_assert_eq!(parsed.len(), rows.len());
        for (p, &(n, a, b)) in parsed.iter().zip(&rows) {
            prop_assert_eq!(p[0], n as f64);
            prop_assert_eq!(p[1].to_bits(), a.to_bits());
            prop_assert_eq!(p[2].to_bits(), b.to_bits());
        }
    }
}
