use minpoly_proj_web::{failure_curve, pmp, table1};
use serde_json::Value;

#[test]
fn table_has_five_rows_of_four() {
    let rows: Value = serde_json::from_str(&table1()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["name"], "A1");
    assert_eq!(
        rows[4]["values"],
        serde_json::json!(["0.214", "0.814", "0.971", "0.996"])
    );
}

#[test]
fn pmp_reports_fraction_and_decimal() {
    let out = pmp(
        r#"{"q": 7, "blocks": [{"poly": "4,1", "exps": [1]}]}"#,
        1,
        4,
    )
    .unwrap();
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["fraction"], "36/49");
    assert_eq!(v["decimal"], "0.7347");
    assert_eq!(v["n"], 1);
    assert!(pmp("{", 1, 3).is_err());
    assert!(pmp(
        r#"{"q": 7, "blocks": [{"poly": "4,1", "exps": [1]}]}"#,
        0,
        3
    )
    .is_err());
}

#[test]
fn failure_curve_decreases() {
    let v: Value = serde_json::from_str(&failure_curve(2, 1e8, 24).unwrap()).unwrap();
    let logs: Vec<f64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["log10_failure"].as_f64().unwrap())
        .collect();
    assert_eq!(logs.len(), 24);
    assert!(logs.windows(2).all(|w| w[1] < w[0]));
    assert!(logs[21] < -6.0);
    assert!(failure_curve(6, 10.0, 3).is_err());
    assert!(failure_curve(2, 0.5, 3).is_err());
}
