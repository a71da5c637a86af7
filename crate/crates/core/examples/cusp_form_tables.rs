// Coefficient tables of cusp forms given by eta products or Poincaré series.

use scv::form::FormSpec;
use scv::poincare::{lift_to_basis, PoincareSpec, SumControl};
use scv::qalg::basis::cusp_basis;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let delta: FormSpec = "eta:24:1".parse()?;
    let table = delta.table(1000)?;
    println!("{delta}: weight {}, tau(1000) = {}", table.weight()?, table.a(1000));

    // P(2, 24, 1) as a combination of the two level-one weight-24 cusp forms
    let spec = PoincareSpec::with_control(2, 24, 1, SumControl::for_probes())?;
    let basis = cusp_basis(24, 1, 60)?;
    let lift = lift_to_basis(&spec, &basis, basis.len() + 2)?;
    println!(
        "P(2,24,1) = {:?} in the echelon basis; predictive mismatch {:.1e}",
        lift.coefficients, lift.predictive_residual
    );
    println!("a(1), a(2), a(3) = {:.8e}, {:.8}, {:.6}", lift.series.at(1), lift.series.at(2), lift.series.at(3));

    let from_spec = FormSpec::poincare(2, 24, 1)?.table(60)?;
    println!("poincare:2:24:1 has a(10) = {:.6e}", from_spec.a(10));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
