//! End-to-end checks of `L^(0)(f, f) = c Q+ f / m^{k-1} + F` for three forms
//! `f = c P(m, k, N)`, with the correction `F` fitted over a small basis of
//! weight-2 series and tested on held-out coefficients.

mod fit;
mod snap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

pub use fit::{fit_correction, CorrectionBasis, FitResult, MAX_CONDITION};
pub use snap::rational_snap;

use crate::arith::rational_to_f64;
use crate::error::{Error, Result};
use crate::form::FormSpec;
use crate::poincare::{cusp_coeff_detailed, qplus_series_detailed, PoincareSpec, SumControl};
use crate::qalg::{divisor_sum, FloatSeries, QSeries};
use crate::shiftconv::{l_series, ConvolutionValue, LSeries};

/// `T(f; h) = beta D + 24 beta gamma sigma_1(h) - 12 beta delta sigma_1'(h)`,
/// where `sigma_1'` skips divisors divisible by 3.
pub fn t_value(h: u64, beta: f64, gamma: f64, delta: f64, dhat_value: f64) -> f64 {
    let s = rational_to_f64(&BigRational::from_integer(divisor_sum(h, 1, None)));
    let s3 = rational_to_f64(&BigRational::from_integer(divisor_sum(h, 1, Some(3))));
    beta * dhat_value + 24.0 * beta * gamma * s - 12.0 * beta * delta * s3
}

/// Largest exponent compared in the reports.
const HMAX: [u64; 3] = [10, 15, 10];
/// Last exponent used for fitting; larger ones are held out.
pub const FIT_END: i64 = 4;
/// Relative rounding allowance for the mock side, on top of truncation estimates.
const MOCK_REL_ERROR: f64 = 1e-12;
/// Coefficients of `Q+` used in the rational `T` values are snapped to
/// denominators dividing into `n^3` and must lie this close.
const SNAP_DISTANCE: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct Identity {
    pub lhs: String,
    pub rhs: String,
    pub basis: Vec<String>,
    pub coefficients: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PerH {
    pub h: i64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Combined error budget: convolution tail, fit uncertainty, and series error.
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// One row of the `T(f; h)` table of the level-9 example.
#[derive(Clone, Debug, Serialize)]
pub struct TRow {
    pub h: u64,
    pub numeric: f64,
    /// `beta (c Q+ f / m^{k-1})_h` assembled from snapped `Q+` coefficients.
    pub exact: String,
    pub exact_value: f64,
}

/// The fitted weakly holomorphic term of the weight-24 example.
#[derive(Clone, Debug, Serialize)]
pub struct Pole {
    pub exponent: i64,
    pub coefficient: f64,
    pub standard_error: f64,
}

/// Comparison of `Q+` coefficients with `r(n) / n^11`.
#[derive(Clone, Debug, Serialize)]
pub struct AltRow {
    pub n: i64,
    pub qplus: f64,
    pub alternative: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Details {
    pub form: String,
    pub terms: usize,
    pub beta: f64,
    pub scale: f64,
    pub fit: FitResult,
    pub lhs_values: Vec<ConvolutionValue>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_table: Option<Vec<TRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pole: Option<Pole>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poincare_coefficients: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qplus_alternative: Option<Vec<AltRow>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub example: u8,
    pub identity: Identity,
    pub per_h: Vec<PerH>,
    pub pass: bool,
    pub details: Details,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.details.checks.iter().find(|c| c.name == name)
    }
}

/// `alpha` in the alternative form of the level-one mock partner.
pub const ALPHA: f64 = 106.10455;
/// Allowance for the digits of [`ALPHA`] that were not printed.
pub const ALPHA_UNCERTAINTY: f64 = 1e-5;

struct Setup {
    example: u8,
    form: FormSpec,
    poincare: PoincareSpec,
    /// `f = P` rather than `f = P / beta`.
    unit_scale: bool,
    basis: fn(i64) -> Result<CorrectionBasis>,
    lhs: &'static str,
    rhs: &'static str,
}

fn setup(which: u8, control: &SumControl) -> Result<Setup> {
    let stage = |e: Error| e.in_stage("setup");
    Ok(match which {
        1 => Setup {
            example: 1,
            form: FormSpec::delta(),
            poincare: PoincareSpec::with_control(1, 12, 1, *control).map_err(stage)?,
            unit_scale: false,
            basis: |n| {
                CorrectionBasis::new(vec!["E2".into()], vec![crate::qalg::eisenstein(2, n)?.to_float()])
            },
            lhs: "L(Delta, Delta)",
            rhs: "Q+(-1,12,1) Delta / beta + F",
        },
        2 => Setup {
            example: 2,
            form: FormSpec::eta(8, 3)?,
            poincare: PoincareSpec::with_control(1, 4, 9, *control).map_err(stage)?,
            unit_scale: false,
            basis: |n| {
                CorrectionBasis::new(
                    vec![
                        "1 - 24 sum sigma(3n) q^3n".into(),
                        "1 + 12 sum sigma'(3n) q^3n".into(),
                    ],
                    vec![
                        crate::qalg::level9_eisenstein_a(n).to_float(),
                        crate::qalg::level9_eisenstein_b(n).to_float(),
                    ],
                )
            },
            lhs: "L(eta(3tau)^8, eta(3tau)^8)",
            rhs: "Q+(-1,4,9) eta(3tau)^8 / beta + F",
        },
        3 => Setup {
            example: 3,
            form: FormSpec::poincare(2, 24, 1)?,
            poincare: PoincareSpec::with_control(2, 24, 1, *control).map_err(stage)?,
            unit_scale: true,
            basis: |n| {
                let s = 0.5f64.powi(23);
                CorrectionBasis::new(
                    vec!["E4^2 E6 / Delta / 2^23".into(), "E2 / 2^23".into()],
                    vec![
                        crate::qalg::e4sq_e6_over_delta(n)?.to_float().scale(&s),
                        crate::qalg::eisenstein(2, n)?.to_float().scale(&s),
                    ],
                )
            },
            lhs: "L(P(2,24,1), P(2,24,1))",
            rhs: "Q+(-2,24,1) P(2,24,1) / 2^23 + F",
        },
        _ => return Err(Error::invalid(format!("there is no example {which}; choose 1, 2 or 3"))),
    })
}

/// Relative accuracy asked of Kloosterman-Bessel sums compared with the
/// smallest convolution tail.
pub const KLOOSTERMAN_MARGIN: f64 = 1e-2;

/// `spec` with its tolerance relaxed to `KLOOSTERMAN_MARGIN` times the
/// smallest nonzero convolution tail, measured against the largest
/// convolution value.
/// Asking for more only lengthens the `c`-sums without moving any residual.
fn kloosterman_spec(spec: &PoincareSpec, lseries: &LSeries) -> PoincareSpec {
    // exact zeros (3 not dividing h at level 9) carry no tail and say nothing
    let tail = lseries
        .tail_estimates()
        .into_iter()
        .filter(|&t| t > 0.0)
        .fold(f64::INFINITY, f64::min);
    let size = lseries.values.iter().map(|v| v.value.abs()).fold(1.0, f64::max);
    let tol = if tail.is_finite() {
        spec.control.tol.max(KLOOSTERMAN_MARGIN * tail / size)
    } else {
        spec.control.tol
    };
    PoincareSpec {
        control: spec.control.with_tol(tol),
        ..*spec
    }
}

/// Runs one example end to end with `terms` convolution terms per shift.
pub fn verify_example(which: u8, control: &SumControl, terms: usize) -> Result<Report> {
    let setup = setup(which, control)?;
    let hmax = HMAX[which as usize - 1];
    let spec = &setup.poincare;
    let (m, k) = (spec.m as i64, spec.k);

    let table = setup
        .form
        .table(terms + hmax as usize)
        .map_err(|e| e.in_stage("coefficients"))?;
    let lseries = l_series(&table, &table, 0, hmax, terms, control).map_err(|e| e.in_stage("lseries"))?;

    let spec = &kloosterman_spec(spec, &lseries);
    let beta_value = cusp_coeff_detailed(spec, spec.m).map_err(|e| e.in_stage("petersson"))?;
    let beta = beta_value.value;
    let scale = if setup.unit_scale { 1.0 } else { 1.0 / beta };
    let scale_rel_error = if setup.unit_scale { 0.0 } else { beta_value.tail_estimate / beta.abs() };

    let (qplus, qplus_tail) = qplus_series_detailed(spec, hmax as i64).map_err(|e| e.in_stage("mock"))?;
    let lo = 1 - m;
    let f_series = table.to_series().truncate(hmax as i64 + m).map_err(|e| e.in_stage("mock"))?;
    let norm = scale / (m as f64).powi(k as i32 - 1);
    let mock = qplus.mul(&f_series).scale(&norm);
    let f_abs = f_series.map(|_, c| c.abs());
    let mock_error = qplus_tail.mul(&f_abs).scale(&norm.abs());

    let lhs = QSeries::from_fn(lo, hmax as i64, |e| if e >= 1 { lseries.series.at(e) } else { 0.0 });
    let sigma = QSeries::from_fn(lo, hmax as i64, |e| {
        let tail = if e >= 1 { lseries.values[e as usize - 1].tail_estimate } else { 0.0 };
        let m = mock.at(e).abs();
        tail + mock_error.at(e) + (scale_rel_error + MOCK_REL_ERROR) * m.max(1.0)
    });
    let basis = (setup.basis)(hmax as i64).map_err(|e| e.in_stage("basis"))?;
    let fit = fit_correction(&lhs, &mock, &basis, lo..=FIT_END, FIT_END + 1..=hmax as i64, Some(&sigma))
        .map_err(|e| e.in_stage("fit"))?;

    let per_h: Vec<PerH> = (lo..=hmax as i64)
        .map(|e| {
            let rhs = mock.at(e) + fit.correction_at(&basis, e);
            PerH {
                h: e,
                lhs: lhs.at(e),
                rhs,
                residual: lhs.at(e) - rhs,
                tolerance: sigma.at(e) + fit.correction_error_at(&basis, e),
            }
        })
        .collect();

    let mut checks = Vec::new();
    let held_out: Vec<&PerH> = per_h.iter().filter(|p| p.h > FIT_END).collect();
    let worst = held_out
        .iter()
        .map(|p| p.residual.abs() / p.tolerance)
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "held-out residuals".into(),
        pass: worst <= 1.0,
        detail: format!("largest |residual| / tolerance over h > {FIT_END} is {worst:.3}"),
    });
    let fit_tol = per_h
        .iter()
        .filter(|p| p.h <= FIT_END)
        .map(|p| p.tolerance)
        .fold(0.0, f64::max);
    let held_tol = held_out.iter().map(|p| p.tolerance).fold(0.0, f64::max);
    checks.push(Check {
        name: "predictive residual".into(),
        pass: fit.predictive_residual <= 10.0 * fit_tol.max(held_tol),
        detail: format!(
            "predictive residual {:.3e}, fit residual {:.3e}, tolerance {:.3e}",
            fit.predictive_residual,
            fit.fit_residual,
            fit_tol.max(held_tol)
        ),
    });

    let mut details = Details {
        form: setup.form.label(),
        terms,
        beta,
        scale,
        fit: fit.clone(),
        lhs_values: lseries.values.clone(),
        checks: Vec::new(),
        t_table: None,
        pole: None,
        poincare_coefficients: None,
        qplus_alternative: None,
    };
    match which {
        1 => {
            let (rows, check) = alternative_form(&qplus, &qplus_tail).map_err(|e| e.in_stage("alternative form"))?;
            checks.push(check);
            details.qplus_alternative = Some(rows);
        }
        2 => {
            let (rows, check) = t_table(&qplus, &lseries.values, beta, &fit, hmax).map_err(|e| e.in_stage("rationality"))?;
            checks.push(check);
            details.t_table = Some(rows);
        }
        _ => {
            let pole = Pole {
                exponent: basis.series[0].start(),
                coefficient: fit.coefficients[0],
                standard_error: fit.standard_errors[0],
            };
            checks.push(Check {
                name: "weakly holomorphic correction".into(),
                pass: basis.series[0].start() < 0
                    && basis.series[0].at(basis.series[0].start()) != 0.0
                    && pole.coefficient.abs() > 5.0 * pole.standard_error,
                detail: format!(
                    "coefficient {:.6e} +- {:.1e} on a series starting at q^{}",
                    pole.coefficient, pole.standard_error, pole.exponent
                ),
            });
            let a: Vec<f64> = (1..=2)
                .map(|n| cusp_coeff_detailed(spec, n).map(|v| v.value))
                .collect::<Result<_>>()
                .map_err(|e| e.in_stage("poincare"))?;
            details.poincare_coefficients = Some(a);
            details.pole = Some(pole);
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    details.checks = checks;
    Ok(Report {
        example: setup.example,
        identity: Identity {
            lhs: setup.lhs.into(),
            rhs: setup.rhs.into(),
            basis: basis.labels.clone(),
            coefficients: fit.coefficients.clone(),
        },
        per_h,
        pass,
        details,
    })
}

/// Compares `Q+(-1, 12, 1)` with `q^{-1} - 65520/691 + sum r(n) n^{-11} q^n`.
///
/// `alpha` is only known to its printed digits, so each comparison allows
/// `ALPHA_UNCERTAINTY |2 alpha - 1464| |tau(n)| / n^11` on top of the
/// truncation estimate of `Q+`.
fn alternative_form(qplus: &FloatSeries, qplus_tail: &FloatSeries) -> Result<(Vec<AltRow>, Check)> {
    let nmax = qplus.nmax().min(6);
    let r = crate::qalg::r_series(ALPHA, nmax)?;
    let tau = crate::qalg::delta(nmax.max(1)).to_float();
    let mut worst: f64 = 0.0;
    let rows: Vec<AltRow> = (-1..=nmax)
        .map(|n| {
            let row = AltRow {
                n,
                qplus: qplus.at(n),
                alternative: match n {
                    0 => -65520.0 / 691.0,
                    _ => r.at(n) / (n as f64).powi(11),
                },
            };
            let alpha_part = if n >= 1 {
                ALPHA_UNCERTAINTY * (2.0 * ALPHA - 1464.0).abs() * tau.at(n).abs() / (n as f64).powi(11)
            } else {
                0.0
            };
            let allowed = alpha_part + qplus_tail.at(n) + 1e-9 * row.qplus.abs().max(1.0);
            worst = worst.max((row.qplus - row.alternative).abs() / allowed);
            row
        })
        .collect();
    // alpha^2 - 1464 alpha is the only alpha-dependent part of r(1)
    let r0 = crate::qalg::r_series(0.0, 1)?.at(1);
    let c = qplus.at(1) - r0;
    let implied = (1464.0 - (1464.0f64.powi(2) + 4.0 * c).sqrt()) / 2.0;
    let check = Check {
        name: "alternative form of Q+".into(),
        pass: worst <= 1.0,
        detail: format!(
            "largest difference is {worst:.3} of its allowance; Q+ implies alpha = {implied:.7}"
        ),
    };
    Ok((rows, check))
}

/// `T(f; h)` for `3 | h`, numerically and from snapped `Q+` coefficients.
fn t_table(
    qplus: &FloatSeries,
    lhs: &[ConvolutionValue],
    beta: f64,
    fit: &FitResult,
    hmax: u64,
) -> Result<(Vec<TRow>, Check)> {
    let f = crate::qalg::eta_power(8, 3, hmax as i64 - qplus.start())?;
    let mut snapped = Vec::new();
    let mut worst_snap: f64 = 0.0;
    for n in qplus.start()..=hmax as i64 {
        let c = qplus.at(n);
        let den = (n.unsigned_abs().max(1)).pow(3);
        let (r, d) = rational_snap(c, den);
        worst_snap = worst_snap.max(d);
        snapped.push((n, r));
    }
    let (gamma, delta) = (fit.coefficients[0], fit.coefficients[1]);
    let rows: Vec<TRow> = (3..=hmax)
        .step_by(3)
        .map(|h| {
            let exact = snapped
                .iter()
                .filter(|(n, _)| *n < h as i64)
                .fold(BigRational::zero(), |acc, (n, q)| acc + q * f.at(h as i64 - n));
            TRow {
                h,
                numeric: t_value(h, beta, gamma, delta, lhs[h as usize - 1].value),
                exact_value: rational_to_f64(&exact),
                exact: exact.to_string(),
            }
        })
        .collect();
    let worst_t = rows
        .iter()
        .map(|r| (r.numeric - r.exact_value).abs())
        .fold(0.0, f64::max);
    let check = Check {
        name: "rational T values".into(),
        pass: worst_snap <= SNAP_DISTANCE && worst_t <= 1e-2,
        detail: format!(
            "Q+ coefficients within {worst_snap:.1e} of rationals; numeric T within {worst_t:.2e} of them"
        ),
    };
    Ok((rows, check))
}
