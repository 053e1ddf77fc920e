//! Runs the exact property suites and prints any failing check.

use wstlab::expcli::{verify, Suite};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for suite in [Suite::Association, Suite::Markov, Suite::Balance] {
        let report = verify(suite, 1, Some(20_000))?;
        println!("{}: {} checks, all pass: {}", report.suite, report.checks.len(), report.all_pass());
        for c in report.failures() {
            println!("  FAILED {} on {}: {} > {}", c.name, c.subject, c.measured, c.bound);
        }
    }
    Ok(())
}
