//! Rankin-Cohen brackets of q-expansions and the holomorphic projection of a
//! bracket involving a harmonic Maass form.
//!
//! Derivatives are theta-derivatives `q^n -> n q^n`, so bracket coefficients
//! stay rational in the input coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{binomial, factorial_f64};
use crate::error::{Error, Result};
use crate::form::CoefficientTable;
use crate::poincare::{qplus_series, PoincareSpec, SumControl};
use crate::qalg::{Coeff, FloatSeries, QSeries};
use crate::shiftconv::{alpha_coeff, l_series_with, stream, LSeries, NuParams};

/// A q-expansion together with its weight, which may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSeries<C> {
    pub series: QSeries<C>,
    pub weight: i64,
}

impl<C: Coeff> WeightedSeries<C> {
    pub fn new(series: QSeries<C>, weight: i64) -> Self {
        WeightedSeries { series, weight }
    }
}

/// `[f, g]_nu = sum_mu (-1)^mu C(k+nu-1, nu-mu) C(l+nu-1, mu) theta^mu f theta^{nu-mu} g`.
pub fn rc_bracket<C: Coeff>(
    f: &WeightedSeries<C>,
    g: &WeightedSeries<C>,
    nu: u32,
) -> Result<WeightedSeries<C>> {
    let (k, l) = (f.weight, g.weight);
    let start = f.series.start() + g.series.start();
    let nmax = (f.series.nmax() + g.series.start()).min(g.series.nmax() + f.series.start());
    if nmax < start {
        return Err(Error::Truncation(format!(
            "bracket of series known to q^{} and q^{} has no known coefficients",
            f.series.nmax(),
            g.series.nmax()
        )));
    }
    let mut df = vec![f.series.clone()];
    let mut dg = vec![g.series.clone()];
    for _ in 0..nu {
        df.push(df.last().unwrap().theta_derivative());
        dg.push(dg.last().unwrap().theta_derivative());
    }
    let mut out = QSeries::from_fn(start, nmax, |_| C::zero());
    for mu in 0..=nu {
        let mut c = binomial(k + nu as i64 - 1, (nu - mu) as u64) * binomial(l + nu as i64 - 1, mu as u64);
        if mu % 2 == 1 {
            c = -c;
        }
        if c.is_zero() {
            continue;
        }
        let term = df[mu as usize].mul(&dg[(nu - mu) as usize]);
        out = out.add(&term.scale(&C::from_bigint(&c)));
    }
    Ok(WeightedSeries::new(out, k + l + 2 * nu as i64))
}

/// Indices of `G_{a,b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GPolyParams {
    pub a: i64,
    pub b: i64,
}

impl GPolyParams {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a < 2 || b < 0 {
            return Err(Error::invalid(format!("G_(a,b) needs a >= 2 and b >= 0, got ({a}, {b})")));
        }
        Ok(GPolyParams { a, b })
    }

    /// `(-1)^j C(a+b-3, a-2-j) C(j+b-2, j)` for `j = 0..=a-2`.
    fn terms(&self) -> Vec<BigInt> {
        (0..=self.a - 2)
            .map(|j| {
                let c = binomial(self.a + self.b - 3, (self.a - 2 - j) as u64)
                    * binomial(j + self.b - 2, j as u64);
                if j % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect()
    }
}

/// `G_{a,b}(X, Y) = sum_j (-1)^j C(a+b-3, a-2-j) C(j+b-2, j) X^{a-2-j} Y^j`.
pub fn g_poly(p: GPolyParams, x: &BigRational, y: &BigRational) -> BigRational {
    let deg = (p.a - 2) as usize;
    p.terms()
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            BigRational::from_integer(c) * num_traits::pow(x.clone(), deg - j) * num_traits::pow(y.clone(), j)
        })
        .fold(BigRational::zero(), |acc, t| acc + t)
}

pub fn g_poly_f64(p: GPolyParams, x: f64, y: f64) -> f64 {
    eval_homogeneous(&float_terms(p), x, y)
}

fn float_terms(p: GPolyParams) -> Vec<f64> {
    p.terms()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect()
}

/// `sum_j c_j X^{d-j} Y^j` with `d = len - 1`.
fn eval_homogeneous(c: &[f64], x: f64, y: f64) -> f64 {
    let d = c.len() as i32 - 1;
    c.iter()
        .enumerate()
        .map(|(j, c)| c * x.powi(d - j as i32) * y.powi(j as i32))
        .sum()
}

/// Holomorphic part of the harmonic Maass form whose shadow is `scale * P(m, k, N)`:
/// `-scale (k-2)! Q+ / m^{k-1}`, with `Q+` normalized to principal part `q^{-m}`.
pub fn mock_partner(spec: &PoincareSpec, scale: f64, nmax: i64) -> Result<WeightedSeries<f64>> {
    let q = qplus_series(spec, nmax)?;
    let c = -scale * factorial_f64(spec.k as u64 - 2) / (spec.m as f64).powi(spec.k as i32 - 1);
    Ok(WeightedSeries::new(q.scale(&c), 2 - spec.k as i64))
}

/// Output of [`projected_bracket`].
#[derive(Clone, Debug)]
pub struct ProjectedBracket {
    /// The projection of `[M, f2]_nu`, known up to `q^hmax`.
    pub series: FloatSeries,
    /// `[M+, f2]_nu`.
    pub bracket: FloatSeries,
    /// `L^(nu)(f2, f1)` from the convolution engine.
    pub l_series: LSeries,
    /// Largest disagreement between the explicit double sum and `-l_series`.
    pub cross_check: f64,
}

/// Holomorphic projection of `[M, f2]_nu` where `M` is harmonic with
/// holomorphic part `mplus` (weight `2 - k1`) and shadow `f1`.
///
/// The double sum is evaluated from its explicit kernel through the paired
/// streaming engine. It must agree with `-L^(nu)(f2, f1)` (computed with the
/// weights `(k1, k2)` and `s = k1 - 1`), so that the projection equals
/// `[M+, f2]_nu + (k1 - 2)! L^(nu)(f2, f1)`; a mismatch beyond the tail
/// estimates is reported as a numeric failure.
pub fn projected_bracket(
    mplus: &WeightedSeries<f64>,
    f2: &CoefficientTable,
    f1: &CoefficientTable,
    nu: u32,
    hmax: u64,
    terms: usize,
    control: &SumControl,
) -> Result<ProjectedBracket> {
    let k1 = f1.weight()?;
    let k2 = f2.weight()?;
    if mplus.weight != 2 - k1 as i64 {
        return Err(Error::invalid(format!(
            "mock partner has weight {}, expected 2 - k1 = {}",
            mplus.weight,
            2 - k1 as i64
        )));
    }
    let params = NuParams {
        nu,
        k1,
        k2,
        s: k1 as f64 - 1.0,
    };
    let a = 2 * nu as i64 - k1 as i64 + k2 as i64 + 2;
    if k1 < k2 || nu > (k1 - k2) / 2 || a < 2 {
        return Err(Error::invalid(format!(
            "nu = {nu} with weights ({k1}, {k2}) is outside the projection formula's range"
        )));
    }

    let f2_series = f2.to_series().truncate((hmax as i64 - mplus.series.start()).min(f2.nmax() as i64))?;
    let bracket = rc_bracket(mplus, &WeightedSeries::new(f2_series, k2 as i64), nu)?;
    let bracket = bracket.series.truncate(hmax as i64)?;

    let alphas: Vec<f64> = (0..=nu)
        .map(|mu| alpha_coeff(nu, k1, k2, mu).to_f64().unwrap_or(f64::NAN))
        .collect();
    let gs: Vec<Vec<f64>> = (0..=nu)
        .map(|mu| GPolyParams::new(a, k1 as i64 - mu as i64).map(float_terms))
        .collect::<Result<_>>()?;
    let l = l_series_with(f2, f1, params, hmax, terms, control)?;
    let fact = factorial_f64(k1 as u64 - 2);
    let mut cross_check: f64 = 0.0;
    let mut coeffs = bracket.coeffs().to_vec();
    for (i, lv) in l.values.iter().enumerate() {
        let h = (i + 1) as f64;
        let kernel = |n: f64| {
            let nh = n + h;
            let mut acc = 0.0;
            for (mu, (alpha, g)) in alphas.iter().zip(&gs).enumerate() {
                let mu = mu as f64;
                let nu = nu as f64;
                acc += alpha
                    * (nh.powf(-nu - k2 as f64 + 1.0) * eval_homogeneous(g, nh, n)
                        - n.powf(mu - k1 as f64 + 1.0) * nh.powf(nu - mu));
            }
            acc
        };
        let direct = stream(f2, f1, i as i64 + 1, terms, control.tail_window, kernel);
        let gap = (direct.value + lv.value).abs();
        let allowed = direct.tail + lv.tail_estimate + 1e-9 * lv.value.abs().max(1.0);
        if gap > allowed {
            return Err(Error::NumericFailure {
                what: format!("projection double sum at h = {}", i + 1),
                partial: direct.value,
                estimate: gap,
            });
        }
        cross_check = cross_check.max(gap);
        coeffs[(i as i64 + 1 - bracket.start()) as usize] -= fact * direct.value;
    }
    let series = QSeries::new(bracket.start(), bracket.nmax(), coeffs)?;
    Ok(ProjectedBracket {
        series,
        bracket,
        l_series: l,
        cross_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::{delta, eisenstein, ExactSeries};

    fn rational(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn w(s: ExactSeries, k: i64) -> WeightedSeries<BigRational> {
        WeightedSeries::new(s, k)
    }

    #[test]
    fn bracket_zero_is_product() {
        let e4 = eisenstein(4, 20).unwrap();
        let e6 = eisenstein(6, 20).unwrap();
        let b = rc_bracket(&w(e4.clone(), 4), &w(e6.clone(), 6), 0).unwrap();
        assert_eq!(b.series, e4.mul(&e6));
        assert_eq!(b.weight, 10);
    }

    #[test]
    fn e4_e6_bracket_is_a_multiple_of_delta() {
        let e4 = eisenstein(4, 12).unwrap();
        let e6 = eisenstein(6, 12).unwrap();
        let b = rc_bracket(&w(e4, 4), &w(e6, 6), 1).unwrap();
        let d = delta(12);
        let c = b.series.at(1);
        assert!(!c.is_zero());
        for n in 0..=10 {
            assert_eq!(b.series.at(n), d.at(n) * &c, "q^{n}");
        }
        assert_eq!(b.weight, 12);
    }

    #[test]
    fn g_poly_small_cases() {
        let (x, y) = (rational(7), rational(3));
        assert_eq!(g_poly(GPolyParams::new(2, 5).unwrap(), &x, &y), rational(1));
        // G_{3,b} = b X - (b-1) Y
        let b = 5;
        assert_eq!(g_poly(GPolyParams::new(3, b).unwrap(), &x, &y), rational(b * 7 - (b - 1) * 3));
        assert!(GPolyParams::new(1, 0).is_err());
        assert_eq!(g_poly_f64(GPolyParams::new(3, 5).unwrap(), 7.0, 3.0), 23.0);
    }

    #[test]
    fn laurent_inputs_keep_negative_exponents() {
        let f = WeightedSeries::new(QSeries::new(-1, 5, vec![1.0, 0.0, -0.25, 0.0, 0.0, 0.5, 0.0]).unwrap(), -2);
        let g = WeightedSeries::new(QSeries::new(1, 8, vec![1.0, -8.0, 0.0, 20.0, 0.0, 0.0, -70.0, 64.0]).unwrap(), 4);
        let b = rc_bracket(&f, &g, 0).unwrap();
        assert_eq!(b.series.start(), 0);
        assert_eq!(b.series.at(0), 1.0);
        let b1 = rc_bracket(&f, &g, 1).unwrap();
        // q^0 pairs r = -1 with u = 1: C(k, 1) u - C(l, 1) r = -2 + 4
        assert_eq!(b1.series.at(0), 4.0 - 2.0);
    }

    fn delta_setup(terms: usize) -> (CoefficientTable, WeightedSeries<f64>) {
        let d = crate::form::FormSpec::delta().table(terms + 10).unwrap();
        let spec = PoincareSpec::new(1, 12, 1).unwrap();
        let beta = crate::poincare::petersson_beta(&spec).unwrap();
        (d, mock_partner(&spec, 1.0 / beta, 6).unwrap())
    }

    #[test]
    fn projection_of_delta_bracket_is_quasimodular() {
        let (d, mplus) = delta_setup(40_000);
        let p = projected_bracket(&mplus, &d, &d, 0, 4, 40_000, &SumControl::default()).unwrap();
        assert_eq!(p.bracket.at(-1), 0.0);
        let beta = 2.8402;
        for h in 1..=4i64 {
            let sigma: i64 = (1..=h).filter(|d| h % d == 0).sum();
            // the projection is 10! times -E_2/beta
            let want = 24.0 * sigma as f64 / beta;
            let got = p.series.at(h) / factorial_f64(10);
            assert!((got - want).abs() < 0.01 * want, "h={h}: {got} vs {want}");
            let diff = (p.series.at(h) - p.bracket.at(h)) / factorial_f64(10);
            assert!((diff - p.l_series.series.at(h)).abs() < 1e-9 * diff.abs());
        }
    }

    #[test]
    fn zero_second_form_projects_to_zero() {
        let (_, mplus) = delta_setup(1000);
        let z = CoefficientTable::zero(12, 1, 1100);
        let d = CoefficientTable::from_series("d", 12, 1, &delta(1100).to_float()).unwrap();
        let p = projected_bracket(&mplus, &z, &d, 0, 3, 1000, &SumControl::default()).unwrap();
        assert!(p.series.coeffs().iter().all(|&c| c == 0.0));
        assert!(projected_bracket(&mplus, &z, &d, 1, 3, 1000, &SumControl::default()).is_err());
    }
}
