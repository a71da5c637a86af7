// The three worked examples end to end, at a reduced number of terms.
//
// Pass the number of terms as the first argument; `scv verify` runs the same
// pipeline with the full default of one million.

use scv::poincare::SumControl;
use scv::verify::verify_example;

fn run(terms: usize) -> Result<(), Box<dyn std::error::Error>> {
    for which in 1..=3 {
        let report = verify_example(which, &SumControl::default(), terms)?;
        println!("example {which}: {} = {}", report.identity.lhs, report.identity.rhs);
        for (label, c) in report.identity.basis.iter().zip(&report.identity.coefficients) {
            println!("  {label}: {c:.8e}");
        }
        for p in &report.per_h {
            println!("  h = {:>3}: residual {:>10.2e} (tolerance {:.2e})", p.h, p.residual, p.tolerance);
        }
        for c in &report.details.checks {
            println!("  [{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        if !report.pass {
            return Err(format!("example {which} failed").into());
        }
    }
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    run(50_000)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    match std::env::args().nth(1) {
        Some(t) => run(t.parse()?),
        None => run_example(),
    }
}
