use std::process::ExitCode;

use kframe_validation::{criteria, evaluate};

fn main() -> ExitCode {
    let all = criteria();
    let mut failed = 0;
    println!("running {} acceptance criteria", all.len());
    for c in &all {
        let (outcome, elapsed) = evaluate(c);
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {:<15} {} ({:.2}s)",
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
        for d in &outcome.details {
            println!("       {d}");
        }
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", all.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
