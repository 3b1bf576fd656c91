//! Runs every verification suite at small bounds and prints the reports.
//!
//! `cargo run --release --example lemma_oracles`

use twobridge::oracle::{run_suite, Bounds, SUITES};

fn main() {
    for name in SUITES {
        let bounds = match name {
            "canon" => Bounds { bound: Some(80), k_max: None },
            "prop23" => Bounds { bound: Some(4), k_max: Some(5) },
            _ => Bounds::default(),
        };
        let report = run_suite(name, bounds).expect("known suite");
        let status = if report.passed { "pass" } else { "FAIL" };
        println!("{name}: {status}, {} cases, {} failures", report.cases, report.failures.len());
        for f in report.failures.iter().take(3) {
            println!("  {}: expected {}, got {} ({})", f.input, f.expected, f.actual, f.detail);
        }
        if let Some(c) = &report.negative_control {
            println!("  negative control caught {} of {} corruptions", c.detected, c.cases);
        }
    }
}
