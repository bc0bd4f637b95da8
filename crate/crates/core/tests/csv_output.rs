use absreg::sweep::{emit_csv, format_sig, intervals, Axis, Field, Sense, SweepGrid, Table};
use absreg::tables;

fn read_back(table: &Table) -> (Vec<String>, Vec<Vec<String>>) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    emit_csv(table, &path).unwrap();
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn mixed_fields_round_trip() {
    let mut t = Table::new(["name", "value", "count", "ok"]);
    t.push(vec![Field::Text("a, \"quoted\" name".into()), 0.1.into(), Field::Int(3), true.into()]);
    t.push(vec![Field::Text("nan".into()), f64::NAN.into(), Field::Int(-1), false.into()]);
    let (header, rows) = read_back(&t);
    assert_eq!(header, ["name", "value", "count", "ok"]);
    assert_eq!(rows[0], ["a, \"quoted\" name", "0.100000000", "3", "true"]);
    assert_eq!(rows[1], ["nan", "NaN", "-1", "false"]);
}

#[test]
fn numbers_parse_back_to_nine_significant_digits() {
    let values = [std::f64::consts::PI, -1.0 / 3.0, 6.02214076e23, 1.5e-12, 0.0, 1.0];
    let mut t = Table::new(["v"]);
    for v in values {
        t.push(vec![v.into()]);
    }
    let (_, rows) = read_back(&t);
    for (v, row) in values.iter().zip(&rows) {
        let back: f64 = row[0].parse().unwrap();
        assert!((back - v).abs() <= 1e-8 * v.abs(), "{v} -> {}", row[0]);
        assert_eq!(row[0], format_sig(*v));
    }
}

#[test]
fn grid_table_has_one_row_per_point() {
    let grid = SweepGrid::new(
        vec![Axis::linspace("x", 0.0, 1.0, 3), Axis::linspace("y", 0.0, 1.0, 4)],
        (0..12).map(|k| k as f64).collect(),
    )
    .unwrap();
    let (header, rows) = read_back(&grid.to_table("value"));
    assert_eq!(header, ["x", "y", "value"]);
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[5], ["0.500000000", "0.333333333", "5.00000000"]);
}

#[test]
fn interval_table_round_trips() {
    let ivs = intervals(|x| x * x, 0.0, 1.0, 0.25, Sense::AtLeast, "square >= 1/4");
    let (header, rows) = read_back(&Table::from(ivs.as_slice()));
    assert!(header.iter().any(|h| h == "lo"));
    assert_eq!(rows.len(), 1);
    let lo_col = header.iter().position(|h| h == "lo").unwrap();
    let lo: f64 = rows[0][lo_col].parse().unwrap();
    assert!((lo - 0.5).abs() < 1e-8);
}

#[test]
fn exact_entropy_table_csv_is_complete() {
    let (header, rows) = read_back(&tables::table3_csv(&tables::table3().unwrap()));
    assert_eq!(header[0], "d");
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == header.len()));
}
