// Symmetrized shifted convolution values and their generating function.

use scv::form::FormSpec;
use scv::poincare::SumControl;
use scv::shiftconv::{dhat, derived_series, l_series, ConvolutionRequest};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let terms = 50_000;
    let delta = FormSpec::delta().table(terms + 10)?;

    let v = dhat(&delta, &delta, &ConvolutionRequest::new(1, terms))?;
    println!(
        "D-hat(Delta, Delta, 1; 11) = {:.5} (tail {:.1e} after {} terms)",
        v.value, v.tail_estimate, v.terms_used
    );

    // away from the symmetric point the plain series converges absolutely
    let control = SumControl::default().with_tol(1e-6);
    let d = derived_series(&delta, &delta, 1, 0, 13.0, terms, &control, false)?;
    println!("D(Delta, Delta, 1; 13) = {:.8e} (tail bound {:.1e})", d.value, d.tail_estimate);

    let eta8 = FormSpec::eta(8, 3)?.table(terms + 10)?;
    let ls = l_series(&eta8, &eta8, 0, 9, terms, &SumControl::default())?;
    println!("L(eta(3tau)^8) = {}", ls.series);
    for h in [1, 2, 4, 5, 7, 8] {
        if ls.series.at(h) != 0.0 {
            return Err(format!("coefficient {h} should vanish exactly").into());
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
