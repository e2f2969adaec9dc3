//! Acceptance suite: prints one verdict per criterion.
//!
//! The target fails when a criterion's verdict differs from the expected one:
//! every criterion passes except those listed in `KNOWN_FAILURES`, which must
//! still print FAIL.

use std::process::ExitCode;

use zetascope::acceptance::{run_all, KNOWN_FAILURES};
use zetascope::parallel::thread_count;

fn main() -> ExitCode {
    let threads = thread_count(None).unwrap_or(None);
    let verdicts = run_all(threads);
    let mut unexpected = Vec::new();
    for v in &verdicts {
        println!("{}", v.line());
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == v.id);
        match (v.pass, known) {
            (true, None) => {}
            (false, Some(_)) if v.explained => {}
            (false, Some(_)) => unexpected.push(format!("criterion {} failed beyond the recorded discrepancy", v.id)),
            (true, Some(_)) => unexpected.push(format!("criterion {} passed but is recorded as failing", v.id)),
            (false, None) => unexpected.push(format!("criterion {} failed", v.id)),
        }
    }
    for (id, why) in KNOWN_FAILURES {
        println!("note: criterion {id} fails because {why}");
    }
    if verdicts.len() != 10 {
        unexpected.push(format!("expected 10 criteria, ran {}", verdicts.len()));
    }
    if unexpected.is_empty() {
        println!("acceptance: {} of 10 criteria pass; the failures match the recorded analysis", verdicts.iter().filter(|v| v.pass).count());
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("acceptance: {u}");
        }
        ExitCode::FAILURE
    }
}
