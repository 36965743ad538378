use k3lab_web::{fibre_layout, layout, transfer, transfer_trace, yz_rows, yz_table};
use serde_json::Value;

#[test]
fn nodal_layout_has_24_nodes() {
    let l = layout(0.25).unwrap();
    assert_eq!(l.fibres.len(), 24);
    assert!(l.fibres.iter().all(|f| f.kodaira == "I1" && f.euler == 1));
    assert_eq!(l.total_euler, 24);
    assert!(l.smooth);
    let inner = l.fibres.iter().filter(|f| (f.re.hypot(f.im) - 0.5f64.powf(1.0 / 12.0)).abs() < 1e-8).count();
    assert_eq!(inner, 12);
}

#[test]
fn cuspidal_layout() {
    let l = layout(0.0).unwrap();
    assert_eq!(l.fibres.len(), 12);
    assert!(l.fibres.iter().all(|f| f.kodaira == "II"));
}

#[test]
fn json_exports() {
    let v: Value = serde_json::from_str(&fibre_layout(0.1).unwrap()).unwrap();
    assert_eq!(v["fibres"].as_array().unwrap().len(), 24);
    let v: Value = serde_json::from_str(&yz_table(3).unwrap()).unwrap();
    assert_eq!(v, serde_json::json!([[0, "1"], [1, "24"], [2, "324"], [3, "3200"]]));
    let v: Value = serde_json::from_str(&transfer_trace(2, 1, 0.25, 32).unwrap()).unwrap();
    assert_eq!(v["valid"], true);
}

#[test]
fn transfer_moves_one_unit() {
    let t = transfer(2, 1, 0.25, 64).unwrap();
    assert!(t.valid);
    let (first, last) = (&t.frames[0], t.frames.last().unwrap());
    assert!(first.fibres.len() == 24 && last.fibres.len() == 24);
    assert_eq!(first.m.iter().sum::<u32>(), 3);
    assert_eq!(last.m.iter().sum::<u32>(), 3);
    assert!(transfer(1, 2, 0.25, 64).is_err());
}

#[test]
fn yz_rows_match_the_series() {
    let rows = yz_rows(5);
    assert_eq!(rows[5], (5, "176256".to_string()));
}
