//! Acceptance gate: runs the twelve criteria with seed 42 and prints one line each.
//! Tolerances are exact p-adic valuations at N = 16 (see `deltalin::selftest`).
//! Runs without the test harness so the lines show up in `cargo test` output.

use std::process::ExitCode;
use std::time::Instant;

use deltalin::selftest::{run_all, PRECISION};

const SEED: u64 = 42;

fn main() -> ExitCode {
    assert_eq!(PRECISION, 16);
    let start = Instant::now();
    let report = run_all(SEED);
    for c in &report.criteria {
        println!(
            "criterion {:>2} {} {} ({})",
            c.id,
            if c.passed { "PASS" } else { "FAIL" },
            c.title,
            c.detail
        );
    }
    println!("suite time {:.2?}", start.elapsed());
    let failed: Vec<u32> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if report.criteria.len() == 12 && failed.is_empty() {
        println!("acceptance: 12/12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
