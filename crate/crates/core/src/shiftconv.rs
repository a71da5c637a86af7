//! Shifted convolution Dirichlet series `sum_n a1(n+h) a2(n) (n+h)^mu / n^s`,
//! their symmetrized combinations, and the generating series over `h`.
//!
//! The symmetrized series are conditionally convergent at `s = k1 - 1`. They
//! are summed with both halves combined per `n` before accumulation, so every
//! summand carries the small factor `n^{-s} - (n+h)^{-s}`, and the result is
//! the mean of the trailing partial sums.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, DIVISOR_BOUND_CONSTANT};
use crate::error::{Error, Result};
use crate::form::CoefficientTable;
use crate::poincare::SumControl;
use crate::qalg::{FloatSeries, QSeries};

/// Parameters of one `D-hat` evaluation. `s` defaults to `k1 - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvolutionRequest {
    pub h: u64,
    pub nu: u32,
    pub s: Option<f64>,
    pub terms: usize,
    pub control: SumControl,
}

impl ConvolutionRequest {
    pub fn new(h: u64, terms: usize) -> Self {
        ConvolutionRequest {
            h,
            nu: 0,
            s: None,
            terms,
            control: SumControl::default(),
        }
    }

    pub fn with_nu(self, nu: u32) -> Self {
        ConvolutionRequest { nu, ..self }
    }

    pub fn with_s(self, s: f64) -> Self {
        ConvolutionRequest { s: Some(s), ..self }
    }

    pub fn with_control(self, control: SumControl) -> Self {
        ConvolutionRequest { control, ..self }
    }
}

/// A truncated convolution sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionValue {
    pub h: i64,
    pub nu: u32,
    pub s: f64,
    pub value: f64,
    pub tail_estimate: f64,
    pub terms_used: usize,
    /// `tail_estimate <= control.tol`.
    pub converged: bool,
}

/// `C(nu - k1 + 1, nu - mu) C(nu + k2 - 1, mu)`.
pub fn alpha_coeff(nu: u32, k1: u32, k2: u32, mu: u32) -> BigInt {
    assert!(mu <= nu, "mu = {mu} exceeds nu = {nu}");
    let (nu, k1, k2) = (nu as i64, k1 as i64, k2 as i64);
    binomial(nu - k1 + 1, (nu - mu as i64) as u64) * binomial(nu + k2 - 1, mu as u64)
}

/// `sum_{mu=0}^{nu} alpha_coeff(nu, k1, k2, mu)`.
pub fn beta_coeff(nu: u32, k1: u32, k2: u32) -> BigInt {
    (0..=nu).map(|mu| alpha_coeff(nu, k1, k2, mu)).sum()
}

/// Windowed value of a streamed sum and its tail estimate.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Streamed {
    pub value: f64,
    pub tail: f64,
}

/// Partial sums `S_1..S_T` of `sum_n a_shift(n+h) a_base(n) kernel(n)`.
///
/// The value is the mean `A(T)` of the last `W` partial sums, and the tail
/// estimate is `2 sd + |A(T) - A(T/2)|` where `sd` is their standard
/// deviation and `A(T/2)` the mean of the `W` sums ending at `T/2`.
pub(crate) fn stream(
    shifted: &CoefficientTable,
    base: &CoefficientTable,
    h: i64,
    terms: usize,
    tail_window: usize,
    kernel: impl Fn(f64) -> f64,
) -> Streamed {
    let w = tail_window.min((terms / 10).max(1));
    let (mid, last) = (Window::ending_at(terms / 2, w), Window::ending_at(terms, w));
    let (mut mid_acc, mut last_acc) = (Welford::default(), Welford::default());
    let mut sum = Neumaier::default();
    for n in 1..=terms {
        let a = shifted.a(n as i64 + h);
        let b = base.a(n as i64);
        if a != 0.0 && b != 0.0 {
            sum.add(a * b * kernel(n as f64));
        }
        if mid.contains(n) {
            mid_acc.push(sum.value());
        }
        if last.contains(n) {
            last_acc.push(sum.value());
        }
    }
    let value = last_acc.mean;
    let drift = if terms >= 2 { (value - mid_acc.mean).abs() } else { 0.0 };
    Streamed {
        value,
        tail: 2.0 * last_acc.sd() + drift,
    }
}

#[derive(Clone, Copy)]
struct Window {
    first: usize,
    last: usize,
}

impl Window {
    fn ending_at(last: usize, w: usize) -> Self {
        Window {
            first: last.saturating_sub(w - 1).max(1),
            last,
        }
    }

    fn contains(&self, n: usize) -> bool {
        (self.first..=self.last).contains(&n)
    }
}

#[derive(Default)]
struct Welford {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn sd(&self) -> f64 {
        if self.count < 2.0 {
            0.0
        } else {
            (self.m2 / self.count).sqrt()
        }
    }
}

/// Compensated running sum.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}


fn check_tables(f1: &CoefficientTable, f2: &CoefficientTable, h: i64, terms: usize) -> Result<()> {
    if terms == 0 {
        return Err(Error::invalid("terms must be positive"));
    }
    let need = terms as i64 + h.max(0);
    if (f1.nmax() as i64) < need || f2.nmax() < terms {
        return Err(Error::Truncation(format!(
            "{terms} terms at shift {h} need a1 to q^{need} and a2 to q^{terms}, \
             tables reach q^{} and q^{}",
            f1.nmax(),
            f2.nmax()
        )));
    }
    Ok(())
}

/// `D^(mu)(f1, f2, h; s) = sum_n a1(n+h) a2(n) (n+h)^mu / n^s`, truncated at `terms`.
///
/// With `s > (k1 + k2)/2 + mu` the sum converges absolutely and the tail is
/// bounded using `|a_i(n)| <= C_i d(n) n^{(k_i-1)/2}`, with `C_i` the largest
/// ratio observed in the table. Smaller `s` is refused unless `conditional`
/// is set, in which case the windowed estimate is reported instead.
pub fn derived_series(
    f1: &CoefficientTable,
    f2: &CoefficientTable,
    h: i64,
    mu: u32,
    s: f64,
    terms: usize,
    control: &SumControl,
    conditional: bool,
) -> Result<ConvolutionValue> {
    let (k1, k2) = (f1.weight()?, f2.weight()?);
    check_tables(f1, f2, h, terms)?;
    let absolute = s > (k1 + k2) as f64 / 2.0 + mu as f64;
    if !absolute && !conditional {
        return Err(Error::invalid(format!(
            "s = {s} is not beyond the absolute convergence bound {}; \
             conditional summation must be requested explicitly",
            (k1 + k2) as f64 / 2.0 + mu as f64
        )));
    }
    let hf = h as f64;
    let kernel = |n: f64| (n + hf).powi(mu as i32) * n.powf(-s);
    let mut value = Neumaier::default();
    for n in 1..=terms {
        let a = f1.a(n as i64 + h);
        let b = f2.a(n as i64);
        if a != 0.0 && b != 0.0 {
            value.add(a * b * kernel(n as f64));
        }
    }
    let (value, tail) = if absolute {
        let bound = deligne_tail(f1, f2, h, mu, s, terms);
        (value.value(), bound)
    } else {
        let st = stream(f1, f2, h, terms, control.tail_window, kernel);
        (st.value, st.tail)
    };
    Ok(ConvolutionValue {
        h,
        nu: 0,
        s,
        value,
        tail_estimate: tail,
        terms_used: terms,
        converged: tail <= control.tol,
    })
}

/// `max_n |a(n)| / (d(n) n^{(k-1)/2})` over the table.
fn deligne_constant(t: &CoefficientTable, k: u32) -> f64 {
    let nmax = t.nmax();
    let mut d = vec![0u32; nmax + 1];
    for i in 1..=nmax {
        for j in (i..=nmax).step_by(i) {
            d[j] += 1;
        }
    }
    (1..=nmax)
        .map(|n| t.a(n as i64).abs() / (d[n] as f64 * (n as f64).powf((k as f64 - 1.0) / 2.0)))
        .fold(0.0, f64::max)
}

fn deligne_tail(f1: &CoefficientTable, f2: &CoefficientTable, h: i64, mu: u32, s: f64, terms: usize) -> f64 {
    let (k1, k2) = (f1.weight.unwrap_or(0) as f64, f2.weight.unwrap_or(0) as f64);
    let c = deligne_constant(f1, k1 as u32) * deligne_constant(f2, k2 as u32);
    // d(n) <= 3.53 n^{1/3}, and n + h <= (1 + h/T) n beyond T
    let e1 = (k1 - 1.0) / 2.0 + mu as f64 + 1.0 / 3.0;
    let e = e1 + (k2 - 1.0) / 2.0 + 1.0 / 3.0 - s;
    if e >= -1.0 {
        return f64::INFINITY;
    }
    let t = terms as f64;
    let stretch = (1.0 + h.max(0) as f64 / t).powf(e1.max(0.0));
    c * DIVISOR_BOUND_CONSTANT.powi(2) * stretch * t.powf(e + 1.0) / (-e - 1.0)
}

/// Weights and evaluation point of a `D-hat^(nu)` sum, given explicitly so the
/// two coefficient slots can be filled independently of `(k1, k2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NuParams {
    pub nu: u32,
    pub k1: u32,
    pub k2: u32,
    pub s: f64,
}

impl NuParams {
    fn validate(&self) -> Result<()> {
        if self.k1 < self.k2 || self.k1 % 2 == 1 || self.k2 % 2 == 1 {
            return Err(Error::invalid(format!(
                "weights must be even with k1 >= k2, got ({}, {})",
                self.k1, self.k2
            )));
        }
        if self.nu > (self.k1 - self.k2) / 2 {
            return Err(Error::invalid(format!(
                "nu = {} exceeds (k1 - k2)/2 = {}",
                self.nu,
                (self.k1 - self.k2) / 2
            )));
        }
        Ok(())
    }
}

fn check_shift(h: u64, terms: usize) -> Result<()> {
    if h == 0 {
        return Err(Error::invalid("the shift h must be positive"));
    }
    if (terms as u64) < 10 * h {
        return Err(Error::invalid(format!(
            "{terms} terms is fewer than 10 h = {}",
            10 * h
        )));
    }
    Ok(())
}

/// `sum_mu alpha_mu D^(nu-mu)(h; s-mu) - beta D^(0)(slot2, slot1, -h; s-nu)`
/// with `a1` read from `shifted` and `a2` from `base`.
///
/// Both parts are combined per `n`: after reindexing the subtracted series,
/// the summand is `a1(n+h) a2(n) sum_mu alpha_mu (n+h)^{nu-mu} (n^{mu-s} - (n+h)^{mu-s})`.
pub fn dhat_nu_with(
    shifted: &CoefficientTable,
    base: &CoefficientTable,
    h: u64,
    params: NuParams,
    terms: usize,
    control: &SumControl,
) -> Result<ConvolutionValue> {
    params.validate()?;
    check_shift(h, terms)?;
    control.validate(1)?;
    check_tables(shifted, base, h as i64, terms)?;
    let alphas: Vec<f64> = (0..=params.nu)
        .map(|mu| alpha_coeff(params.nu, params.k1, params.k2, mu).to_f64().unwrap_or(f64::NAN))
        .collect();
    let (nu, s, hf) = (params.nu as f64, params.s, h as f64);
    let kernel = |n: f64| {
        let x = hf / n;
        let log1p = x.ln_1p();
        let mut acc = 0.0;
        for (mu, alpha) in alphas.iter().enumerate() {
            let mu = mu as f64;
            // (n+h)^{nu-mu} (n^{mu-s} - (n+h)^{mu-s}) = n^{nu-s} (1+x)^{nu-mu} (1 - (1+x)^{mu-s})
            acc += alpha * ((nu - mu) * log1p).exp() * -((mu - s) * log1p).exp_m1();
        }
        acc * n.powf(nu - s)
    };
    let st = stream(shifted, base, h as i64, terms, control.tail_window, kernel);
    Ok(ConvolutionValue {
        h: h as i64,
        nu: params.nu,
        s,
        value: st.value,
        tail_estimate: st.tail,
        terms_used: terms,
        converged: st.tail <= control.tol,
    })
}

/// `D-hat^(nu)(f1, f2, h; s)`, with `s` defaulting to `k1 - 1`.
pub fn dhat_nu(f1: &CoefficientTable, f2: &CoefficientTable, req: &ConvolutionRequest) -> Result<ConvolutionValue> {
    let (k1, k2) = (f1.weight()?, f2.weight()?);
    let params = NuParams {
        nu: req.nu,
        k1,
        k2,
        s: req.s.unwrap_or(k1 as f64 - 1.0),
    };
    dhat_nu_with(f1, f2, req.h, params, req.terms, &req.control)
}

/// `D-hat(f1, f2, h; s) = D(f1, f2, h; s) - [k1 = k2] D(f2, f1, -h; s)`.
///
/// The subtracted series only exists for equal weights; otherwise this is
/// the plain shifted sum, still reported with the windowed estimate.
pub fn dhat(f1: &CoefficientTable, f2: &CoefficientTable, req: &ConvolutionRequest) -> Result<ConvolutionValue> {
    if req.nu != 0 {
        return Err(Error::invalid("dhat takes nu = 0; use dhat_nu"));
    }
    let (k1, k2) = (f1.weight()?, f2.weight()?);
    if k1 == k2 {
        return dhat_nu(f1, f2, req);
    }
    NuParams { nu: 0, k1, k2, s: 0.0 }.validate()?;
    check_shift(req.h, req.terms)?;
    req.control.validate(1)?;
    check_tables(f1, f2, req.h as i64, req.terms)?;
    let s = req.s.unwrap_or(k1 as f64 - 1.0);
    let st = stream(f1, f2, req.h as i64, req.terms, req.control.tail_window, |n| n.powf(-s));
    Ok(ConvolutionValue {
        h: req.h as i64,
        nu: 0,
        s,
        value: st.value,
        tail_estimate: st.tail,
        terms_used: req.terms,
        converged: st.tail <= req.control.tol,
    })
}

/// `sum_{h=1}^{hmax} D-hat^(nu)(f1, f2, h; k1 - 1) q^h` with per-`h` details.
#[derive(Clone, Debug)]
pub struct LSeries {
    pub series: FloatSeries,
    pub values: Vec<ConvolutionValue>,
}

impl LSeries {
    /// False if any coefficient missed the tolerance.
    pub fn converged(&self) -> bool {
        self.values.iter().all(|v| v.converged)
    }

    pub fn tail_estimates(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.tail_estimate).collect()
    }
}

pub fn l_series(
    f1: &CoefficientTable,
    f2: &CoefficientTable,
    nu: u32,
    hmax: u64,
    terms: usize,
    control: &SumControl,
) -> Result<LSeries> {
    let (k1, k2) = (f1.weight()?, f2.weight()?);
    let params = NuParams {
        nu,
        k1,
        k2,
        s: k1 as f64 - 1.0,
    };
    l_series_with(f1, f2, params, hmax, terms, control)
}

/// [`l_series`] with explicit slot parameters, as in [`dhat_nu_with`].
pub fn l_series_with(
    shifted: &CoefficientTable,
    base: &CoefficientTable,
    params: NuParams,
    hmax: u64,
    terms: usize,
    control: &SumControl,
) -> Result<LSeries> {
    if hmax == 0 {
        return Err(Error::invalid("hmax must be at least 1"));
    }
    let values = (1..=hmax)
        .map(|h| dhat_nu_with(shifted, base, h, params, terms, control))
        .collect::<Result<Vec<_>>>()?;
    let series = QSeries::new(1, hmax as i64, values.iter().map(|v| v.value).collect())?;
    Ok(LSeries { series, values })
}
