// Fitting a correction over a basis with held-out checks, and rational recognition.

use scv::qalg::{eisenstein, FloatSeries, QSeries};
use scv::verify::{fit_correction, rational_snap, CorrectionBasis};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let nmax = 10;
    let e2 = eisenstein(2, nmax)?.to_float();
    let mock: FloatSeries = QSeries::from_fn(0, nmax, |n| 1.0 / (n as f64 + 1.0));
    let lhs = mock.add(&e2.scale(&-0.352));
    let noise = QSeries::from_fn(0, nmax, |_| 1e-6);

    let basis = CorrectionBasis::new(vec!["E2".into()], vec![e2])?;
    let fit = fit_correction(&lhs, &mock, &basis, 0..=4, 5..=nmax, Some(&noise))?;
    println!(
        "coefficient {:.6} +- {:.1e}; predictive residual {:.1e}, condition {:.1}",
        fit.coefficients[0], fit.standard_errors[0], fit.predictive_residual, fit.condition
    );

    for (x, den) in [(-8.2500001, 100), (22.391999, 1000), (std::f64::consts::PI, 1000)] {
        let (r, d) = rational_snap(x, den);
        println!("{x} ~ {r} (distance {d:.1e})");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
