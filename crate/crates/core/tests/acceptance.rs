//! Acceptance run: every check of the identity suite, one summary line per criterion.
//!
//! Two checks fail by construction. The stated relation list for `H*(A/I_1)` misses
//! three relations, and the stated generator list for `H^0` disagrees with the minimal
//! generator count in three degrees. Both failures are pinned to their exact reports
//! so that any other change in outcome fails this test.

use std::collections::BTreeMap;

use cobar_core::report;
use cobar_core::verify::{self, CheckResult, Context, VerifyConfig};

/// Working precision `5^K` for integral groups; the suite also compares against `K + 1`.
const PRECISION: u32 = 4;

const CRITERIA: std::ops::RangeInclusive<u8> = 1..=11;

/// `(tag, exact detail)` of the checks that cannot pass as stated.
const KNOWN_FAILURES: &[(&str, &str)] = &[
    (
        "mod-I1/presented-algebra-census",
        "35 cells differ (computed vs presented), first (1,88) 0 vs 1, (1,104) 0 vs 1, (1,136) 0 vs 1, (1,152) 0 vs 1",
    ),
    (
        "invariants/generator-census",
        "t=128: 0 minimal vs 1 stated; t=144: 1 minimal vs 2 stated; t=176: 0 minimal vs 1 stated",
    ),
];

fn summary(n: u8, results: &[&CheckResult]) -> String {
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    if failed.is_empty() {
        format!("criterion {n}: PASS ({} checks)", results.len())
    } else {
        let what: Vec<String> = failed.iter().map(|r| format!("{}: {}", r.tag, r.detail)).collect();
        format!("criterion {n}: FAIL ({}/{} checks) {}", failed.len(), results.len(), what.join("; "))
    }
}

fn main() {
    let cx = Context::new(VerifyConfig { s_cap: None, t_cap: None, precision: PRECISION });
    let results = verify::run(&cx, &[]);
    let mut by_criterion: BTreeMap<u8, Vec<&CheckResult>> = BTreeMap::new();
    for r in &results {
        println!("  [{}] {} {}: {}", r.criterion, if r.passed { "pass" } else { "FAIL" }, r.tag, r.detail);
        by_criterion.entry(r.criterion).or_default().push(r);
    }
    for n in CRITERIA {
        let rs = by_criterion.get(&n).map(Vec::as_slice).unwrap_or(&[]);
        assert!(!rs.is_empty(), "criterion {n} has no checks");
        println!("{}", summary(n, rs));
    }
    assert!(results.len() >= 25);

    let mut unexpected = Vec::new();
    for r in &results {
        match KNOWN_FAILURES.iter().find(|(tag, _)| *tag == r.tag) {
            Some((_, detail)) if r.passed || r.detail != *detail => {
                unexpected.push(format!("{} changed outcome: {}", r.tag, r.detail))
            }
            None if !r.passed => unexpected.push(format!("{}: {}", r.tag, r.detail)),
            _ => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcomes: {unexpected:#?}");
        std::process::exit(1);
    }

    // the overlay fixture matches the built-in one and lands on nonzero cells
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/overlay.txt")).unwrap();
    let arrows = report::parse_overlay(&text).unwrap();
    assert_eq!(arrows, report::parse_overlay(verify::DEFAULT_OVERLAY).unwrap());
    let chart = verify::overlay_chart(&cx, &arrows).unwrap();
    assert!(chart.dangling_arrows().is_empty());
    for a in &arrows {
        println!("  overlay d{} {:?} -> {:?}: {} -> {} classes", a.page, a.from, a.to, chart.multiplicity(a.from.0, a.from.1), chart.multiplicity(a.to.0, a.to.1));
    }
    println!("acceptance: ok");
}
