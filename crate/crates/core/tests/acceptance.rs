use std::io::Write;
use std::time::{Duration, Instant};

use invsemi::suite::{self, CriterionReport};

const SEED: u64 = 20240611;

fn line(text: &str) {
    // bypasses libtest capture so the verdicts land in the log
    let _ = writeln!(std::io::stderr(), "{text}");
}

fn check(criterion: u8, limit: Option<Duration>) -> CriterionReport {
    let start = Instant::now();
    let report = suite::run(criterion, SEED).expect("criterion runs");
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let verdict = if report.passed && in_time { "PASS" } else { "FAIL" };
    line(&format!("criterion {criterion}: {verdict} ({}, {:.2?})", report.name, elapsed));
    assert!(report.passed, "criterion {criterion} failed: {}", report.details);
    assert!(in_time, "criterion {criterion} took {elapsed:?}");
    report
}

#[test]
fn criterion_1_closure_exactness() {
    let r = check(1, Some(Duration::from_secs(1)));
    assert_eq!(r.details["elements"], 34);
    assert_eq!(r.details["d_classes"], 4);
    assert_eq!(r.details["ranks"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn criterion_2_length_round_trip() {
    let r = check(2, Some(Duration::from_secs(30)));
    assert_eq!(r.details["samples"], 100);
    assert_eq!(r.details["weighted_samples"], 50);
}

#[test]
fn criterion_3_right_invariance_consequences() {
    let r = check(3, None);
    for key in ["subinvariance_bound", "inverse_isometry", "d_class_isometry"] {
        assert_eq!(r.details[key]["violations"], 0);
        assert!(r.details[key]["checked"].as_u64().unwrap() > 0);
    }
}

#[test]
fn criterion_4_embedding_distortion() {
    let r = check(4, Some(Duration::from_secs(60)));
    let spaces = r.details["spaces"].as_array().unwrap();
    assert_eq!(spaces.len(), 50);
    assert!(spaces.iter().all(|s| s["points"].as_u64().unwrap() <= 40));
}

#[test]
fn criterion_5_band_decomposition() {
    let r = check(5, Some(Duration::from_secs(60)));
    let residual: f64 = r.details["max_residual_operator_norm"].as_str().unwrap().parse().unwrap();
    assert!(residual <= 1e-9);
    assert_eq!(r.details["multipliers_with_positive_propagation"], 0);
}

#[test]
fn criterion_6_product_metrics() {
    let r = check(6, None);
    assert_eq!(r.details["d1_search"]["status"], "not_found_at_scale");
    assert_eq!(r.details["profile_growth"]["unbounded"], true);
}

#[test]
fn criterion_7_separating_example() {
    let r = check(7, Some(Duration::from_secs(30)));
    assert_eq!(r.details["fim1"]["asdim0"]["status"]["status"], "refuted_at_scale");
    assert!(r.details["fim1"]["asdim0"]["status"]["witness"]["hops"].as_u64().unwrap() >= 8);
    assert_eq!(r.details["fim1"]["sparse"]["status"]["consistent"], true);
}

#[test]
fn criterion_8_determinism() {
    check(8, None);
}
