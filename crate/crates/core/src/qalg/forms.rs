//! Classical modular objects as q-expansions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::series::{Coeff, ExactSeries, FloatSeries, QSeries};
use super::sparse::{eta_product_big, eta_product_i128};
use crate::arith::bernoulli_numbers;
use crate::error::{Error, Result};

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Leading exponent `power * scale / 24` of an eta quotient, if integral.
pub fn eta_leading_exponent(power: u32, scale: u32) -> Result<i64> {
    if power == 0 || scale == 0 {
        return Err(Error::invalid("eta power and scale must be positive"));
    }
    let e = power as i64 * scale as i64;
    if e % 24 != 0 {
        return Err(Error::invalid(format!(
            "eta({scale}tau)^{power} has leading exponent {e}/24, which is not an integer"
        )));
    }
    Ok(e / 24)
}

/// Integer coefficients of `eta(scale tau)^power` at exponents `start..=nmax`.
fn eta_power_integers(power: u32, scale: u32, nmax: i64) -> Result<(i64, Vec<BigInt>)> {
    let start = eta_leading_exponent(power, scale)?;
    let len = (nmax - start + 1).max(0) as usize;
    let coeffs = match eta_product_i128(power, scale as usize, len) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => eta_product_big(power, scale as usize, len),
    };
    Ok((start, coeffs))
}

/// `eta(scale tau)^power = q^{power scale / 24} prod_{n>=1} (1 - q^{scale n})^power`.
pub fn eta_power(power: u32, scale: u32, nmax: i64) -> Result<ExactSeries> {
    let (start, coeffs) = eta_power_integers(power, scale, nmax)?;
    QSeries::new(start, nmax.max(start - 1), coeffs.into_iter().map(int).collect())
}

/// Float version of [`eta_power`] for long tables.
pub fn eta_power_f64(power: u32, scale: u32, nmax: i64) -> Result<FloatSeries> {
    let start = eta_leading_exponent(power, scale)?;
    let len = (nmax - start + 1).max(0) as usize;
    let coeffs: Vec<f64> = match eta_product_i128(power, scale as usize, len) {
        Some(v) => v.into_iter().map(|c| c as f64).collect(),
        None => eta_product_big(power, scale as usize, len)
            .iter()
            .map(f64::from_bigint)
            .collect(),
    };
    QSeries::new(start, nmax.max(start - 1), coeffs)
}

/// `sum_{d | n, excl does not divide d} d^weight`.
pub fn divisor_sum(n: u64, weight: u32, exclude_multiples_of: Option<u64>) -> BigInt {
    let mut acc = BigInt::zero();
    let mut add = |d: u64| {
        if !exclude_multiples_of.is_some_and(|x| d.is_multiple_of(x)) {
            acc += BigInt::from(d).pow(weight);
        }
    };
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            add(d);
            if d * d != n {
                add(n / d);
            }
        }
        d += 1;
    }
    acc
}

/// Divisor sums `sigma_weight(n)` for `n in 0..len` by sieving (`sigma(0) = 0`).
pub fn divisor_sums(weight: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        let p = BigInt::from(d).pow(weight);
        for m in (d..len).step_by(d) {
            out[m] += &p;
        }
    }
    out
}

/// `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n` for even `k >= 2`.
pub fn eisenstein(k: u32, nmax: i64) -> Result<ExactSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::invalid(format!(
            "Eisenstein series need even weight k >= 2, got {k}"
        )));
    }
    let b = &bernoulli_numbers(k as usize)[k as usize];
    let factor = -int(2 * k as i64) / b;
    let len = (nmax + 1).max(0) as usize;
    let sig = divisor_sums(k - 1, len);
    Ok(QSeries::from_fn(0, nmax, |n| {
        if n == 0 {
            BigRational::one()
        } else {
            &factor * int(sig[n as usize].clone())
        }
    }))
}

/// `Delta = eta^24`.
pub fn delta(nmax: i64) -> ExactSeries {
    eta_power(24, 1, nmax).expect("eta^24 has integral leading exponent")
}

/// Klein's `j = E_4^3 / Delta = q^{-1} + 744 + ...`.
pub fn j_function(nmax: i64) -> Result<ExactSeries> {
    let n = nmax.max(-1) + 2;
    let e4 = eisenstein(4, n)?;
    let num = e4.mul(&e4).mul(&e4);
    let j = num.div(&delta(n))?;
    j.truncate(nmax.max(-1))
}

/// `-Delta (j^2 - 1464 j - alpha^2 + 1464 alpha)`, starting at `q^{-1}`.
///
/// `alpha` is a floating constant, so the result is a float series.
pub fn r_series(alpha: f64, nmax: i64) -> Result<FloatSeries> {
    if nmax < -1 {
        return Err(Error::invalid("r_series starts at q^-1; nmax must be >= -1"));
    }
    let j = j_function(nmax)?;
    let d = delta(nmax + 2);
    let j2 = j.mul(&j);
    let poly = j2
        .sub(&j.scale(&int(1464)))
        .to_float()
        .add(&QSeries::monomial(0, alpha * alpha - 1464.0 * alpha, nmax).scale(&-1.0));
    let out = d.to_float().mul(&poly).scale(&-1.0);
    out.truncate(nmax)
}

/// `E_4^2 E_6 / Delta = q^{-1} - 196884 q + ...`, a weakly holomorphic form of weight 2.
pub fn e4sq_e6_over_delta(nmax: i64) -> Result<ExactSeries> {
    let n = nmax.max(-1) + 2;
    let e4 = eisenstein(4, n)?;
    let e6 = eisenstein(6, n)?;
    e4.mul(&e4).mul(&e6).div(&delta(n))?.truncate(nmax.max(-1))
}

/// `1 - 24 sum sigma_1(3n) q^{3n}`.
pub fn level9_eisenstein_a(nmax: i64) -> ExactSeries {
    QSeries::from_fn(0, nmax, |n| match n {
        0 => BigRational::one(),
        _ if n % 3 == 0 => int(-24) * int(divisor_sum(n as u64, 1, None)),
        _ => BigRational::zero(),
    })
}

/// `1 + 12 sum_{n} sum_{d | 3n, 3 does not divide d} d q^{3n}`.
pub fn level9_eisenstein_b(nmax: i64) -> ExactSeries {
    QSeries::from_fn(0, nmax, |n| match n {
        0 => BigRational::one(),
        _ if n % 3 == 0 => int(12) * int(divisor_sum(n as u64, 1, Some(3))),
        _ => BigRational::zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &ExactSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| c.to_integer().try_into().unwrap())
            .collect()
    }

    #[test]
    fn delta_leading_coefficients() {
        let d = eta_power(24, 1, 3).unwrap();
        assert_eq!(d.start(), 1);
        assert_eq!(ints(&d), vec![1, -24, 252]);
        assert_eq!(ints(&eta_power(24, 1, 1).unwrap()), vec![1]);
    }

    #[test]
    fn level_nine_newform() {
        let f = eta_power(8, 3, 4).unwrap();
        assert_eq!(ints(&f), vec![1, 0, 0, -8]);
    }

    #[test]
    fn rejects_fractional_leading_exponent() {
        assert!(matches!(eta_power(1, 1, 5), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn eisenstein_normalizations() {
        let e2 = eisenstein(2, 2).unwrap();
        assert_eq!(ints(&e2), vec![1, -24, -72]);
        let e4 = eisenstein(4, 1).unwrap();
        assert_eq!(ints(&e4), vec![1, 240]);
        let e12 = eisenstein(12, 1).unwrap();
        assert_eq!(e12.at(1), BigRational::new(65520.into(), 691.into()));
        assert!(eisenstein(3, 2).is_err());
        assert!(eisenstein(0, 2).is_err());
    }

    #[test]
    fn divisor_sums_with_exclusion() {
        assert_eq!(divisor_sum(6, 1, None), BigInt::from(12));
        assert_eq!(divisor_sum(6, 1, Some(3)), BigInt::from(3));
        assert_eq!(divisor_sum(1, 1, None), BigInt::from(1));
        assert_eq!(divisor_sum(9, 1, None), BigInt::from(13));
        assert_eq!(divisor_sum(16, 2, None), BigInt::from(1 + 4 + 16 + 64 + 256));
        let sieve = divisor_sums(3, 50);
        for n in 1..50u64 {
            assert_eq!(sieve[n as usize], divisor_sum(n, 3, None));
        }
    }

    #[test]
    fn j_expansion() {
        let j = j_function(2).unwrap();
        assert_eq!(j.start(), -1);
        assert_eq!(ints(&j), vec![1, 744, 196884, 21493760]);
    }

    #[test]
    fn r_series_leading_term() {
        let r = r_series(106.10455, -1).unwrap();
        assert_eq!(r.start(), -1);
        assert_eq!(r.at(-1), -1.0);
        let r = r_series(106.10455, 3).unwrap();
        assert_eq!(r.nmax(), 3);
    }

    #[test]
    fn weakly_holomorphic_weight_two() {
        // E_4^2 E_6 / Delta is minus the theta-derivative of j
        let g = e4sq_e6_over_delta(6).unwrap();
        assert_eq!(g.start(), -1);
        let dj = j_function(6).unwrap().theta_derivative().neg();
        assert_eq!(g, dj);
        assert_eq!(ints(&g)[..3], [1, 0, -196884]);
    }

    #[test]
    fn add_negation_is_zero() {
        let e4 = eisenstein(4, 10).unwrap();
        assert!(e4.add(&e4.neg()).is_zero());
    }
}
