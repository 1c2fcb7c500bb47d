//! Runs the full check suite, clean and with a sign-flipped dissipator.

use dqd_dynamics::validation::{run_suite, Fault, SuiteOptions};

fn main() {
    for opts in [
        SuiteOptions::default(),
        SuiteOptions {
            fault: Some(Fault::DissipatorSignFlip),
        },
    ] {
        let report = run_suite(&opts);
        println!("fault: {:?}", opts.fault);
        for c in &report.checks {
            println!(
                "  {:<32} {}  {}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.detail
            );
        }
    }
}
