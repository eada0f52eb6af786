//! Primary acceptance suite: one `[PASS]`/`[FAIL]` line per criterion.

use std::process::ExitCode;

use rankin::acceptance::run_primary_with_repro;

fn main() -> ExitCode {
    let alt = if rayon::current_num_threads() == 3 { 2 } else { 3 };
    let report = match run_primary_with_repro(20_240_601, alt) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance suite aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    for o in &report.outcomes {
        println!("{o}");
    }
    for (id, t) in &report.timings {
        eprintln!("criterion {id}: {:.2}s", t.as_secs_f64());
    }
    let failed: Vec<u32> = report.outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", report.outcomes.len(), report.outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
