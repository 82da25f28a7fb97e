use serde_json::Value;
use surveycode_demo::{compare_json, decision_field_json, normalize_json};

#[test]
fn normalize_returns_tokens() {
    let v: Value = serde_json::from_str(&normalize_json("Die Flüchtlinge!!").unwrap()).unwrap();
    assert!(v["tokens"].as_array().unwrap().len() >= 2);
    assert_eq!(
        v["normalized"].as_str().unwrap(),
        v["normalized"].as_str().unwrap().to_lowercase()
    );
}

#[test]
fn field_separates_two_clusters() {
    let pts = r#"[{"x":-0.5,"y":0.5,"label":1},{"x":-0.6,"y":0.4,"label":1},
                  {"x":0.5,"y":-0.5,"label":-1},{"x":0.6,"y":-0.4,"label":-1}]"#;
    for gamma in [0.0, 2.0] {
        let v: Value = serde_json::from_str(&decision_field_json(pts, 10.0, gamma, 11).unwrap()).unwrap();
        let values = v["values"].as_array().unwrap();
        assert_eq!(values.len(), 121);
        assert_eq!(v["training_errors"], 0);
        // top-left corner is on the positive side, bottom-right negative
        assert!(values[0].as_f64().unwrap() > 0.0);
        assert!(values[120].as_f64().unwrap() < 0.0);
    }
    assert!(decision_field_json("[]", 1.0, 0.0, 10).is_err());
    assert!(decision_field_json(pts, 1.0, 0.0, 1).is_err());
}

#[test]
fn comparison_reports_both_models() {
    let v: Value = serde_json::from_str(&compare_json(200, 1).unwrap()).unwrap();
    let table = v["table"].as_str().unwrap();
    assert!(table.contains("br") && table.contains("ecc"));
    assert!((0.0..=1.0).contains(&v["br"].as_f64().unwrap()));
    assert!(compare_json(10, 1).is_err());
}
