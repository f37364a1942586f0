use lora_planner_demo::{plan_summary, power_curve, simulate_point};
use serde_json::Value;

#[test]
fn summary_of_default_cell() {
    let v: Value = serde_json::from_str(&plan_summary(1200.0, 0.01, 2.75)).unwrap();
    assert_eq!(v["total_ceil"], 247);
    assert_eq!(v["rings"].as_array().unwrap().len(), 6);
    assert!((v["avg_power_dbm"].as_f64().unwrap() - 12.63).abs() < 0.15);
    let l4 = v["rings"][3]["outer_m"].as_f64().unwrap();
    assert!((l4 - 789.5).abs() < 1.6);
}

#[test]
fn summary_reports_infeasible_radius() {
    let v: Value = serde_json::from_str(&plan_summary(2000.0, 0.01, 2.75)).unwrap();
    assert_eq!(v["error"], "infeasible-radius");
}

#[test]
fn curve_is_a_sawtooth_below_max_power() {
    let c = power_curve(1200.0, 0.01, 2.75, 240);
    assert_eq!(c.len(), 3 * 240);
    for t in c.chunks(3) {
        assert!(t[1] <= 14.0 + 1e-9);
        assert!(t[2] >= t[1] - 1e-9 && t[2] <= 14.0);
    }
    assert!((c[c.len() - 2] - 14.0).abs() < 1e-9);
    assert!(power_curve(5000.0, 0.01, 2.75, 10).is_empty());
}

#[test]
fn point_simulation() {
    let v: Value = serde_json::from_str(&simulate_point(1200.0, 0.01, 2.75, "allocated", 600.0, 20_000, 3)).unwrap();
    assert_eq!(v["ring"], 3);
    let est = &v["estimate"];
    assert_eq!(est["trials"], 20_000);
    let q0 = v["q0"].as_f64().unwrap();
    assert!((est["q0_hat"].as_f64().unwrap() - q0).abs() < 4.0 * (q0 / 20_000.0).sqrt());
    let fixed: Value = serde_json::from_str(&simulate_point(1200.0, 0.01, 2.75, "fixed:14", 600.0, 20_000, 3)).unwrap();
    assert!(fixed["q0"].is_null());
    let bad: Value = serde_json::from_str(&simulate_point(1200.0, 0.01, 2.75, "loud", 600.0, 20_000, 3)).unwrap();
    assert_eq!(bad["error"], "invalid-input");
}
