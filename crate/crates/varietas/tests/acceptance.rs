//! Acceptance suite: runs every registered criterion at its stated tolerance
//! and prints one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use varietas::verify::acceptance_criteria;

#[test]
fn acceptance_criteria_all_pass() {
    let outcomes = acceptance_criteria(0);
    assert_eq!(outcomes.len(), 10, "exactly ten criteria are registered");
    let mut failures = Vec::new();
    for o in &outcomes {
        let id = o
            .criterion
            .expect("acceptance outcomes carry criterion ids");
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:2} [{verdict}] {}: {} ({} ms)",
            o.name, o.details, o.millis
        );
        if !o.passed {
            failures.push(id);
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}

#[test]
fn acceptance_criteria_are_seed_stable() {
    // a different seed must not break any randomized criterion
    let outcomes = acceptance_criteria(20260809);
    for o in &outcomes {
        assert!(
            o.passed,
            "criterion {:?} fails under seed change: {}",
            o.criterion, o.details
        );
    }
}
