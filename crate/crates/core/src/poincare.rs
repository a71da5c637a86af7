//! Fourier coefficients of Poincaré series `P(m, k, N)` and of the holomorphic
//! part of the Maass-Poincaré series `Q(-m, k, N)`.
//!
//! Both are sums over moduli `c = N, 2N, ...` of Kloosterman sums weighted by
//! Bessel functions. Summation stops as soon as a Weil-type bound on the
//! remaining tail falls below the tolerance, so `c_max` is only a cap.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::arith::{factorial_f64, gcd_i64, DIVISOR_BOUND_CONSTANT};
use crate::error::{Error, Result};
use crate::qalg::FloatSeries;
use crate::specialfun::{bessel, kloosterman, BesselQuery, KloostermanQuery};

/// Truncation and tolerance policy for the infinite sums in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumControl {
    /// Largest Kloosterman modulus visited.
    pub c_max: u64,
    /// Target accuracy, relative to `max(1, |value|)`.
    pub tol: f64,
    /// Safety bound on the number of summands of convolution sums.
    pub max_terms: usize,
    /// Number of trailing partial sums averaged when accelerating a
    /// conditionally convergent sum.
    pub tail_window: usize,
}

impl Default for SumControl {
    fn default() -> Self {
        SumControl {
            c_max: 100_000,
            tol: 1e-10,
            max_terms: 50_000_000,
            tail_window: 100_000,
        }
    }
}

impl SumControl {
    /// Defaults for the many coefficients evaluated while lifting to a basis.
    pub fn for_probes() -> Self {
        SumControl {
            c_max: 10_000,
            ..Self::default()
        }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        SumControl { tol, ..self }
    }

    pub fn with_c_max(self, c_max: u64) -> Self {
        SumControl { c_max, ..self }
    }

    pub fn validate(&self, level: u64) -> Result<()> {
        if self.c_max < level {
            return Err(Error::invalid(format!(
                "c_max = {} is below the level {level}",
                self.c_max
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.tail_window == 0 {
            return Err(Error::invalid("tail window must be positive"));
        }
        Ok(())
    }
}

/// Index, weight and level of `P(m, k, N)` / `Q(-m, k, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoincareSpec {
    pub m: u64,
    pub k: u32,
    pub level: u64,
    pub control: SumControl,
}

impl PoincareSpec {
    pub fn new(m: u64, k: u32, level: u64) -> Result<Self> {
        Self::with_control(m, k, level, SumControl::default())
    }

    pub fn with_control(m: u64, k: u32, level: u64, control: SumControl) -> Result<Self> {
        if k < 2 || k % 2 == 1 {
            return Err(Error::invalid(format!("weight must be even and >= 2, got {k}")));
        }
        if m == 0 || level == 0 {
            return Err(Error::invalid("index m and level N must be positive"));
        }
        control.validate(level)?;
        Ok(PoincareSpec {
            m,
            k,
            level,
            control,
        })
    }

    /// `i^k`, which is real because `k` is even.
    fn i_pow_k(&self) -> f64 {
        if self.k.is_multiple_of(4) {
            1.0
        } else {
            -1.0
        }
    }
}

/// A truncated Kloosterman-Bessel sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientValue {
    pub value: f64,
    /// Bound on the neglected moduli `c > c_used`.
    pub tail_estimate: f64,
    pub c_used: u64,
    pub converged: bool,
}

impl CoefficientValue {
    fn exact(value: f64) -> Self {
        CoefficientValue {
            value,
            tail_estimate: 0.0,
            c_used: 0,
            converged: true,
        }
    }

    fn into_result(self, what: impl FnOnce() -> String) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NumericFailure {
                what: what(),
                partial: self.value,
                estimate: self.tail_estimate,
            })
        }
    }
}

/// Sums `prefactor * sum_{N | c} K(mm, n, c) c^{-c_power} B(x / c)`, where
/// `tail(c)` bounds the contribution of all moduli beyond `c`.
fn kloosterman_series(
    spec: &PoincareSpec,
    mm: i64,
    n: i64,
    prefactor: f64,
    mut term: impl FnMut(u64, f64) -> Result<f64>,
    tail: impl Fn(u64) -> f64,
) -> Result<CoefficientValue> {
    let ctl = spec.control;
    let mut acc = 0.0;
    let mut c = spec.level;
    let mut last = c;
    while c <= ctl.c_max {
        let k = kloosterman(KloostermanQuery::new(mm, n, c as i64));
        if k != 0.0 {
            acc += term(c, k)?;
        }
        last = c;
        let t = prefactor.abs() * tail(c);
        if t <= ctl.tol * (prefactor * acc).abs().max(1.0) {
            return Ok(CoefficientValue {
                value: prefactor * acc,
                tail_estimate: t,
                c_used: c,
                converged: true,
            });
        }
        c += spec.level;
    }
    let t = prefactor.abs() * tail(last);
    Ok(CoefficientValue {
        value: prefactor * acc,
        tail_estimate: t,
        c_used: last,
        converged: t <= ctl.tol * (prefactor * acc).abs().max(1.0),
    })
}

/// Bound on `sum_{c > c0, N | c} d(c) sqrt(g) c^{-1/2} A c^{-p}`, the tail of a
/// Kloosterman-Bessel series under the Weil bound, by comparison with an integral.
fn power_tail(c0: u64, level: u64, g: f64, a: f64, p: f64) -> f64 {
    let e = p + 1.0 / 6.0;
    let c0 = c0 as f64;
    DIVISOR_BOUND_CONSTANT * g.sqrt() * a * c0.powf(1.0 - e) / ((e - 1.0) * level as f64)
}

/// Full coefficient of `q^n` in `P(m, k, N)`, with its truncation data.
pub fn cusp_coeff_detailed(spec: &PoincareSpec, n: u64) -> Result<CoefficientValue> {
    if n == 0 {
        return Err(Error::invalid("cusp form coefficients start at n = 1"));
    }
    let (m, k) = (spec.m as f64, spec.k);
    let nu = k - 1;
    let x0 = 4.0 * PI * (m * n as f64).sqrt();
    let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let prefactor = TAU * sign * (n as f64 / m).powf((k as f64 - 1.0) / 2.0);
    let tol = spec.control.tol;
    let g = gcd_i64(spec.m as i64, n as i64) as f64;
    // |J_nu(x)| <= (x/2)^nu / nu!
    let a = (x0 / 2.0).powi(nu as i32) / factorial_f64(nu as u64);
    let mut v = kloosterman_series(
        spec,
        spec.m as i64,
        n as i64,
        prefactor,
        |c, kl| {
            let j = bessel(BesselQuery::j(nu, x0 / c as f64), tol * 1e-2)?;
            Ok(kl / c as f64 * j)
        },
        |c| power_tail(c, spec.level, g, a, nu as f64),
    )?;
    if n == spec.m {
        v.value += 1.0;
    }
    Ok(v)
}

/// Full coefficient of `q^n` in `P(m, k, N)`, including the leading `q^m`.
pub fn cusp_coeff(spec: &PoincareSpec, n: u64) -> Result<f64> {
    cusp_coeff_detailed(spec, n)?.into_result(|| {
        format!(
            "coefficient {n} of P({}, {}, {})",
            spec.m, spec.k, spec.level
        )
    })
}

/// Coefficient of `q^n`, `n >= 0`, in the holomorphic part of `Q(-m, k, N)`
/// normalized to principal part exactly `q^{-m}`, with truncation data.
pub fn qplus_coeff_detailed(spec: &PoincareSpec, n: u64) -> Result<CoefficientValue> {
    let (m, k) = (spec.m as f64, spec.k);
    let nu = k - 1;
    let ik = spec.i_pow_k();
    let tol = spec.control.tol;
    if n == 0 {
        let prefactor = -TAU.powi(k as i32) * ik * m.powi(nu as i32) / factorial_f64(nu as u64);
        // |K(-m, 0, c)| <= gcd(m, c) <= m
        return kloosterman_series(
            spec,
            -(spec.m as i64),
            0,
            prefactor,
            |c, kl| Ok(kl / (c as f64).powi(k as i32)),
            |c| m * (c as f64).powf(1.0 - k as f64) / ((k as f64 - 1.0) * spec.level as f64),
        );
    }
    let x0 = 4.0 * PI * (m * n as f64).sqrt();
    let prefactor = -TAU * ik * (n as f64 / m).powf((1.0 - k as f64) / 2.0);
    let g = gcd_i64(spec.m as i64, n as i64) as f64;
    let a = (x0 / 2.0).powi(nu as i32) / factorial_f64(nu as u64);
    kloosterman_series(
        spec,
        -(spec.m as i64),
        n as i64,
        prefactor,
        |c, kl| {
            let i = bessel(BesselQuery::i(nu, x0 / c as f64), tol * 1e-2)?;
            Ok(kl / c as f64 * i)
        },
        |c| {
            // I_nu(x) <= (x/2)^nu / nu! * exp(x^2 / (4 (nu + 1))), and x decreases in c
            let x = x0 / c as f64;
            power_tail(c, spec.level, g, a, nu as f64) * (x * x / (4.0 * (nu as f64 + 1.0))).exp()
        },
    )
}

/// Normalized holomorphic-part coefficient; see [`qplus_coeff_detailed`].
pub fn qplus_coeff(spec: &PoincareSpec, n: u64) -> Result<f64> {
    qplus_coeff_detailed(spec, n)?.into_result(|| {
        format!(
            "coefficient {n} of Q+(-{}, {}, {})",
            spec.m, spec.k, spec.level
        )
    })
}

/// The Petersson constant: the coefficient of `q^m` in `P(m, k, N)`.
pub fn petersson_beta(spec: &PoincareSpec) -> Result<f64> {
    cusp_coeff(spec, spec.m)
}

/// [`qplus_series`] without the convergence requirement: the coefficients
/// and, as a second series, their truncation estimates.
pub fn qplus_series_detailed(spec: &PoincareSpec, nmax: i64) -> Result<(FloatSeries, FloatSeries)> {
    let start = -(spec.m as i64);
    let mut values = Vec::new();
    let mut tails = Vec::new();
    for e in start..=nmax {
        let v = match e {
            _ if e == start => CoefficientValue::exact(1.0),
            _ if e < 0 => CoefficientValue::exact(0.0),
            _ => qplus_coeff_detailed(spec, e as u64)?,
        };
        values.push(v.value);
        tails.push(v.tail_estimate);
    }
    Ok((
        crate::qalg::QSeries::new(start, nmax, values)?,
        crate::qalg::QSeries::new(start, nmax, tails)?,
    ))
}

/// Holomorphic part `q^{-m} + sum_{n=0}^{nmax} c(n) q^n` as a float series.
pub fn qplus_series(spec: &PoincareSpec, nmax: i64) -> Result<FloatSeries> {
    let start = -(spec.m as i64);
    let mut coeffs = Vec::with_capacity((nmax - start + 1).max(0) as usize);
    for e in start..=nmax {
        coeffs.push(match e {
            _ if e == start => 1.0,
            _ if e < 0 => 0.0,
            _ => qplus_coeff(spec, e as u64)?,
        });
    }
    crate::qalg::QSeries::new(start, nmax, coeffs)
}

/// Outcome of [`lift_to_basis`].
#[derive(Clone, Debug)]
pub struct LiftResult {
    pub series: FloatSeries,
    pub coefficients: Vec<f64>,
    /// Largest relative mismatch on the fitted probe coefficients.
    pub fit_residual: f64,
    /// Largest relative mismatch on two further coefficients not used in the fit.
    pub predictive_residual: f64,
    /// Largest truncation estimate among the probe coefficients; these need
    /// not meet the tolerance, since the basis fit only needs a few digits.
    pub probe_tail: f64,
}

const HELD_OUT: usize = 2;

/// Expresses `P(m, k, N)` in a basis of cusp forms by matching its first
/// `probe_count` coefficients, and returns the combination at the basis
/// truncation.
pub fn lift_to_basis(
    spec: &PoincareSpec,
    basis: &[FloatSeries],
    probe_count: usize,
) -> Result<LiftResult> {
    let dim = basis.len();
    if dim == 0 || probe_count < dim {
        return Err(Error::invalid(format!(
            "need at least as many probes ({probe_count}) as basis elements ({dim})"
        )));
    }
    let total = probe_count + HELD_OUT;
    let nmax = basis.iter().map(|b| b.nmax()).min().unwrap_or(0);
    if (total as i64) > nmax {
        return Err(Error::Truncation(format!(
            "basis known to q^{nmax}, {total} probe coefficients requested"
        )));
    }
    let probes: Vec<CoefficientValue> = (1..=total as u64)
        .map(|n| cusp_coeff_detailed(spec, n))
        .collect::<Result<_>>()?;
    let targets: Vec<f64> = probes.iter().map(|p| p.value).collect();
    let probe_tail = probes.iter().map(|p| p.tail_estimate).fold(0.0, f64::max);
    let a = DMatrix::from_fn(total, dim, |i, j| basis[j].at(i as i64 + 1));
    let fit_rows = a.rows(0, probe_count).into_owned();
    let b = DVector::from_column_slice(&targets[..probe_count]);
    let svd = fit_rows.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::RankDeficient(format!(
            "probe matrix has singular values in [{smin:e}, {smax:e}]"
        )));
    }
    let x = svd
        .solve(&b, 1e-14 * smax)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let rel = |i: usize| {
        let pred: f64 = (0..dim).map(|j| a[(i, j)] * x[j]).sum();
        (pred - targets[i]).abs() / targets[i].abs().max(1.0)
    };
    let fit_residual = (0..probe_count).map(rel).fold(0.0, f64::max);
    let predictive_residual = (probe_count..total).map(rel).fold(0.0, f64::max);
    let mut series = basis[0].scale(&x[0]);
    for j in 1..dim {
        series = series.add(&basis[j].scale(&x[j]));
    }
    Ok(LiftResult {
        series,
        coefficients: x.iter().copied().collect(),
        fit_residual,
        predictive_residual,
        probe_tail,
    })
}
