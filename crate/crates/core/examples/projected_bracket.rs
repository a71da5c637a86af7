// Holomorphic projection of the bracket of the mock partner of `Delta` with `Delta`.

use scv::arith::factorial_f64;
use scv::form::FormSpec;
use scv::poincare::{petersson_beta, PoincareSpec, SumControl};
use scv::rcproj::{mock_partner, projected_bracket};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let terms = 40_000;
    let d = FormSpec::delta().table(terms + 10)?;
    let spec = PoincareSpec::new(1, 12, 1)?;
    let beta = petersson_beta(&spec)?;
    let mplus = mock_partner(&spec, 1.0 / beta, 6)?;
    println!("M+ starts {}", mplus.series.truncate(2)?);

    let p = projected_bracket(&mplus, &d, &d, 0, 4, terms, &SumControl::default())?;
    println!("kernel sum vs -L agree to {:.1e}", p.cross_check);
    // the projection is -10! E2 / beta
    for h in 1..=4i64 {
        let sigma: i64 = (1..=h).filter(|d| h % d == 0).sum();
        let got = p.series.at(h) / factorial_f64(10);
        let want = 24.0 * sigma as f64 / beta;
        println!("h = {h}: projection / 10! = {got:.5}, 24 sigma(h) / beta = {want:.5}");
        if (got - want).abs() > 0.01 * want {
            return Err(format!("projection at h = {h} is off").into());
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
