//! One PASS/FAIL line per acceptance criterion.

use std::time::Instant;
use umbral::identities::{criterion, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (k, title) in CRITERIA {
        let start = Instant::now();
        let checks = criterion(k);
        let bad: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        let verdict = if bad.is_empty() && !checks.is_empty() { "PASS" } else { "FAIL" };
        let worst = checks.iter().map(|c| c.gap / c.tol).fold(0.0, f64::max);
        println!(
            "{verdict} criterion {k}: {title} ({} checks, worst gap/tol {worst:.2e}, {:.2}s)",
            checks.len(),
            start.elapsed().as_secs_f64()
        );
        for c in &bad {
            println!(
                "    {}: expected {}, computed {}, gap {:.3e} > tol {:.1e} {}",
                c.name, c.expected, c.computed, c.gap, c.tol, c.detail
            );
        }
        if verdict == "FAIL" {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
