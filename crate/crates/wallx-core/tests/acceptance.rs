//! AC-1 … AC-8. Runs without the libtest harness so that the one-line
//! PASS/FAIL report per criterion is always visible; any failure exits 1.

use std::process::ExitCode;

use wallx_core::verify;

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let checks: [(&str, fn() -> verify::CriterionResult); 8] = [
        ("AC-1", verify::ac1),
        ("AC-2", verify::ac2),
        ("AC-3", verify::ac3),
        ("AC-4", verify::ac4),
        ("AC-5", verify::ac5),
        ("AC-6", verify::ac6),
        ("AC-7", verify::ac7),
        ("AC-8", verify::ac8),
    ];
    let mut failed = 0;
    for (id, check) in checks {
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str())) {
            continue;
        }
        let r = check();
        println!("{r}");
        if !r.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
