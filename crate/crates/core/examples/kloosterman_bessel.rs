// Kloosterman sums and the Bessel functions entering Poincaré coefficients.

use scv::specialfun::{bessel, kloosterman, BesselQuery, KloostermanQuery};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (m, n, c) in [(1, 1, 1), (1, 1, 2), (1, 1, 5), (2, 3, 7), (1, 1, 9), (5, -3, 12)] {
        let k = kloosterman(KloostermanQuery::new(m, n, c));
        println!("K({m}, {n}, {c}) = {k:.12}");
    }
    // Weil: |K(m, n, p)| <= 2 sqrt(p) for a prime p not dividing mn
    let k = kloosterman(KloostermanQuery::new(1, 1, 101));
    if k.abs() > 2.0 * 101f64.sqrt() {
        return Err(format!("K(1, 1, 101) = {k} breaks the Weil bound").into());
    }

    for x in [0.5, 2.0, 10.0, 40.0] {
        let j = bessel(BesselQuery::j(11, x), 1e-14)?;
        let i = bessel(BesselQuery::i(11, x), 1e-14)?;
        println!("J_11({x}) = {j:.6e}   I_11({x}) = {i:.6e}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
