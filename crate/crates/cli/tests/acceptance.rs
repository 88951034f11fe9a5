//! Acceptance run: one PASS/FAIL line per criterion, with its budget.
//!
//! Criteria 1-11 live in `bassfin-suites`; criterion 12 exercises the CLI
//! (round trip, fuzzing, golden transcripts). The process exits nonzero when
//! any criterion fails, so `cargo test` reports it.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bassfin_suites::{Report, CRITERIA, DEFAULT_SEED};

const ROUND_TRIPS: usize = 500;
const FUZZ_INPUTS: usize = 10_000;
const CLI_BUDGET: Duration = Duration::from_secs(60);

fn cli_criterion() -> Report {
    let start = Instant::now();
    let mut checks = 0;
    let mut messages = Vec::new();

    match common::round_trip(ROUND_TRIPS, DEFAULT_SEED) {
        Ok(n) => checks += n as u64,
        Err(e) => messages.push(format!("round trip: {e}")),
    }

    let stats = common::fuzz(FUZZ_INPUTS, DEFAULT_SEED);
    checks += stats.inputs as u64;
    if stats.inputs != FUZZ_INPUTS {
        messages.push(format!("fuzz: only {} of {FUZZ_INPUTS} inputs ran", stats.inputs));
    }
    messages.extend(stats.failures.iter().map(|f| format!("fuzz: {f}")));

    let goldens = common::goldens();
    if goldens.len() != 6 {
        messages.push(format!("expected 6 golden transcripts, found {}", goldens.len()));
    }
    for g in &goldens {
        checks += 1;
        if let Err(e) = common::check_golden(env!("CARGO_BIN_EXE_bassfin"), g) {
            messages.push(format!("golden: {e}"));
        }
    }
    match common::check_indent_pairs(&goldens) {
        Ok(3) => checks += 3,
        Ok(n) => messages.push(format!("golden: {n} indent pairs, expected 3")),
        Err(e) => messages.push(format!("golden: {e}")),
    }

    Report {
        id: 12,
        suite: "cli",
        title: "CLI round trip, fuzzing and golden transcripts",
        checks,
        failed: messages.len() as u64,
        messages,
        elapsed: start.elapsed(),
        budget: CLI_BUDGET,
    }
}

fn main() -> ExitCode {
    let mut reports: Vec<Report> = CRITERIA.iter().map(|c| c.run(DEFAULT_SEED)).collect();
    reports.push(cli_criterion());

    let mut failed = 0;
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} [{}] {status} checks={} failures={} elapsed={}ms budget={}ms  {}",
            r.id,
            r.suite,
            r.checks,
            r.failed,
            r.elapsed.as_millis(),
            r.budget.as_millis(),
            r.title,
        );
        if !r.passed() {
            failed += 1;
            for m in r.messages.iter().take(5) {
                println!("    {m}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed (seed {DEFAULT_SEED:#x})", reports.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
