//! The acceptance gate: runs every verification criterion at its pinned
//! scale and prints one pass/fail line per criterion.
//!
//! Run with `cargo test -p ktc-core --test acceptance -- --nocapture` to see
//! the per-criterion lines as they complete.

use ktc_core::acceptance::{all_passed, run_all};

fn default_workers() -> usize {
    std::env::var("KTC_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(8)
}

#[test]
fn acceptance_criteria() {
    let outcomes = run_all(default_workers());
    for outcome in &outcomes {
        println!("{}", outcome.line());
    }
    assert_eq!(outcomes.len(), 9, "all nine criteria must report");
    assert!(
        all_passed(&outcomes),
        "failed criteria:\n{}",
        outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.line())
            .collect::<Vec<_>>()
            .join("\n")
    );
}
