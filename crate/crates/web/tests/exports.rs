use bellbound_web::{bouquet_curve, web_graph, werner_curve};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn twelve_bouquet_curve() {
    let v = parse(&bouquet_curve(0, 100));
    assert_eq!(v["grid"].as_array().unwrap().len(), 100);
    assert!((v["best_value"].as_f64().unwrap() - 1.5209).abs() < 5e-4);
}

#[test]
fn werner_curves() {
    let v = parse(&werner_curve("triangle", 10));
    assert!((v["eta_threshold"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    let last = &v["curve"][9];
    assert_eq!(last[0].as_f64().unwrap(), 1.0);
    assert!((last[1].as_f64().unwrap() - 1.5).abs() < 1e-12);
    let v = parse(&werner_curve("chsh", 4));
    assert!((v["eta_threshold"].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
}

#[test]
fn web_edges_and_errors() {
    let v = parse(&web_graph(8, 2));
    assert_eq!(v["web"].as_array().unwrap().len(), 12);
    assert_eq!(v["antiweb"].as_array().unwrap().len(), 16);
    assert!(parse(&web_graph(4, 2))["error"].is_string());
    assert!(parse(&werner_curve("nope", 3))["error"].is_string());
    assert!(parse(&bouquet_curve(0, 3))["error"].is_string());
}
