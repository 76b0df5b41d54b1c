//! Acceptance suite: every criterion at exact equality, order 32, oracle depth 32.

use std::process::ExitCode;
use std::time::Instant;

use fresco_core::verify::{run, Plan, CRITERIA};

const SEED: u64 = 20_240_601;

fn main() -> ExitCode {
    let plan = Plan::standard(SEED);
    println!(
        "acceptance: order {} depth {} seed {}",
        plan.order, plan.depth, plan.seed
    );
    let start = Instant::now();
    let mut all = true;
    for (id, name) in CRITERIA {
        let t = Instant::now();
        let r = run(id, &plan);
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {id:>2} {name}: {} checks, {} failed ({:.2}s)",
            r.checks,
            r.failed,
            t.elapsed().as_secs_f64()
        );
        for note in &r.notes {
            println!("     note: {note}");
        }
        for f in &r.failures {
            println!("     failure: {f}");
        }
        all &= r.passed;
    }
    println!("total {:.2}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
