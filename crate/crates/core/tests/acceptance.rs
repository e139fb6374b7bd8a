//! Runs all thirteen acceptance criteria and prints one PASS/FAIL line each.

use std::process::ExitCode;

use dpa_core::verify;

fn main() -> ExitCode {
    let quick = std::env::args().any(|a| a == "--quick");
    let reports = verify::run_all(quick);
    for r in &reports {
        println!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} of {} criteria passed", reports.len() - failed, verify::COUNT);
    if failed == 0 && reports.len() == verify::COUNT {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
