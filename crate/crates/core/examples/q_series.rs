// Exact q-expansions: eta products, Eisenstein series and the j-function.

use num_rational::BigRational;
use scv::qalg::{delta, eisenstein, eta_power, j_function};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let nmax = 8;
    let e4 = eisenstein(4, nmax)?;
    let e6 = eisenstein(6, nmax)?;
    println!("E4 = {e4}");
    println!("E6 = {e6}");

    // (E4^3 - E6^2) / 1728 is Delta, which is also eta(tau)^24
    let inv_1728 = BigRational::new(1.into(), 1728.into());
    let from_eisenstein = e4.pow(3).sub(&e6.pow(2)).scale(&inv_1728);
    let from_eta = eta_power(24, 1, nmax)?;
    println!("Delta = {from_eta}");
    let reference = delta(nmax);
    if (0..=nmax).any(|n| from_eisenstein.at(n) != reference.at(n) || from_eta.at(n) != reference.at(n)) {
        return Err("the three constructions of Delta disagree".into());
    }

    println!("eta(3 tau)^8 = {}", eta_power(8, 3, 13)?);
    println!("j = {}", j_function(4)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
