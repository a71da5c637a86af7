// Fourier coefficients of Poincaré series and of the mock modular `Q+`.

use scv::poincare::{cusp_coeff, petersson_beta, qplus_coeff_detailed, PoincareSpec, SumControl};
use scv::verify::rational_snap;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let level1 = PoincareSpec::new(1, 12, 1)?;
    let beta = petersson_beta(&level1)?;
    println!("P(1,12,1) = {beta:.6} Delta");
    // P(1,12,1) is a multiple of Delta, so a(2) / a(1) = tau(2)
    let ratio = cusp_coeff(&level1, 2)? / beta;
    println!("a(2) / a(1) = {ratio:.8}");
    if (ratio + 24.0).abs() > 1e-8 {
        return Err(format!("a(2) / a(1) = {ratio}, expected -24").into());
    }

    // weight 4 on Gamma0(9) converges slowly in c, so ask for 1e-8
    let control = SumControl::default().with_tol(1e-8);
    let level9 = PoincareSpec::with_control(1, 4, 9, control)?;
    for n in [2, 5, 8] {
        let v = qplus_coeff_detailed(&level9, n)?;
        let (r, d) = rational_snap(v.value, n * n * n);
        println!("Q+(-1,4,9)_{n} = {:.10} ~ {r} (distance {d:.1e}, c up to {})", v.value, v.c_used);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
