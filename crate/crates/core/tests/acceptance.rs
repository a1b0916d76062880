//! Runs the twelve acceptance criteria with the default seed and prints one
//! PASS/FAIL line each. A criterion passes when its property holds and it
//! finishes inside its runtime budget.

use std::process::ExitCode;

use spacetime_currents::suite::{self, Config};

fn main() -> ExitCode {
    let cfg = Config::default();
    println!("acceptance: seed {} ({} execution)", cfg.seed, cfg.exec.name());
    let report = suite::run_all(&cfg);
    let mut failed = 0;
    for o in &report.outcomes {
        let ok = o.passed && o.within_limit();
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {} [{:.2} s of {} s]: {}",
            if ok { "PASS" } else { "FAIL" },
            o.index,
            o.name(),
            o.elapsed.as_secs_f64(),
            o.limit().as_secs(),
            o.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", report.outcomes.len() - failed, report.outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
