// Rankin-Cohen brackets and the polynomials `G_{a,b}` of the projection formula.

use num_rational::BigRational;
use scv::qalg::{delta, eisenstein};
use scv::rcproj::{g_poly, rc_bracket, GPolyParams, WeightedSeries};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let nmax = 10;
    let e4 = WeightedSeries::new(eisenstein(4, nmax)?, 4);
    let e6 = WeightedSeries::new(eisenstein(6, nmax)?, 6);

    // the only weight-12 cusp form is Delta, so [E4, E6]_1 is a multiple of it
    let b = rc_bracket(&e4, &e6, 1)?;
    let c = b.series.at(1);
    println!("[E4, E6]_1 = {} = ({c}) Delta", b.series);
    let d = delta(nmax);
    if (0..=nmax).any(|n| b.series.at(n) != d.at(n) * &c) {
        return Err("[E4, E6]_1 is not a multiple of Delta".into());
    }

    let b2 = rc_bracket(&e4, &e4, 2)?;
    println!("[E4, E4]_2 has weight {} and starts {}", b2.weight, b2.series.truncate(3)?);

    let (x, y) = (BigRational::from_integer(5.into()), BigRational::from_integer(2.into()));
    for (a, bb) in [(2, 7), (3, 4), (4, 3), (6, 11)] {
        let p = GPolyParams::new(a, bb)?;
        println!("G_{{{a},{bb}}}(5, 2) = {}", g_poly(p, &x, &y));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
