//! Raising the working precision never turns a passing check into a failing one.

use std::collections::BTreeMap;

use qmeixner::verify::{self, Status, SuiteConfig, SuiteName};

/// Check id → status for one run of `suites` at `precision` digits.
fn statuses(suites: &[SuiteName], precision: u32) -> BTreeMap<String, Status> {
    let mut cfg = SuiteConfig::default_config();
    cfg.suites = suites.to_vec();
    cfg.precision = precision;
    verify::run(&cfg, 0).expect("suite runs").checks.into_iter().map(|c| (c.check_id, c.status)).collect()
}

#[test]
fn ten_more_digits_keep_every_pass() {
    let suites = [SuiteName::QseriesIdentities, SuiteName::Lemma21, SuiteName::FiniteFamily, SuiteName::MeixnerPoly];
    let base = statuses(&suites, 40);
    let finer = statuses(&suites, 50);
    assert_eq!(base.keys().collect::<Vec<_>>(), finer.keys().collect::<Vec<_>>(), "same checks at both precisions");
    let flipped: Vec<&String> = base.iter().filter(|(id, s)| **s == Status::Pass && finer[*id] == Status::Fail).map(|(id, _)| id).collect();
    assert!(flipped.is_empty(), "PASS became FAIL at +10 digits: {flipped:?}");
    assert!(base.values().any(|s| *s == Status::Pass));
}
