use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::rational_to_f64;
use crate::error::{Error, Result};

/// Coefficient ring of a [`QSeries`].
///
/// Implemented for exact rationals and for `f64`. The two never mix
/// implicitly; see [`QSeries::to_float`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: &'static str;
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    /// Field division. Callers guarantee a nonzero divisor.
    fn divide(&self, rhs: &Self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coeff for BigRational {
    const MODE: &'static str = "exact";
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn divide(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Coeff for f64 {
    const MODE: &'static str = "float";
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_bigint(v: &BigInt) -> Self {
        rational_to_f64(&BigRational::from_integer(v.clone()))
    }
    fn divide(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Truncated Laurent expansion `sum_{n = start}^{nmax} c_n q^n`.
///
/// Coefficients below `start` are zero. Coefficients above `nmax` are
/// unknown, and no operation reads or invents them.
#[derive(Clone, PartialEq, Debug)]
pub struct QSeries<C> {
    start: i64,
    nmax: i64,
    coeffs: Vec<C>,
}

pub type ExactSeries = QSeries<BigRational>;
pub type FloatSeries = QSeries<f64>;

impl<C: Coeff> QSeries<C> {
    /// Builds a series from the coefficients of `q^start, ..., q^nmax`.
    pub fn new(start: i64, nmax: i64, coeffs: Vec<C>) -> Result<Self> {
        let expected = (nmax - start + 1).max(0) as usize;
        if coeffs.len() != expected {
            return Err(Error::invalid(format!(
                "{} coefficients supplied for exponents {start}..={nmax}",
                coeffs.len()
            )));
        }
        Ok(QSeries {
            start,
            nmax,
            coeffs,
        })
    }

    pub fn from_fn(start: i64, nmax: i64, f: impl FnMut(i64) -> C) -> Self {
        let coeffs = (start..=nmax).map(f).collect();
        QSeries {
            start,
            nmax,
            coeffs,
        }
    }

    /// The zero power series known up to `nmax`.
    pub fn zero(nmax: i64) -> Self {
        Self::from_fn(0, nmax, |_| C::zero())
    }

    pub fn one(nmax: i64) -> Self {
        Self::monomial(0, C::one(), nmax)
    }

    /// `c q^exponent`, known up to `nmax`.
    pub fn monomial(exponent: i64, c: C, nmax: i64) -> Self {
        Self::from_fn(exponent, nmax.max(exponent - 1), |n| {
            if n == exponent {
                c.clone()
            } else {
                C::zero()
            }
        })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn nmax(&self) -> i64 {
        self.nmax
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `q^n`: zero below the start, `None` above `nmax`.
    pub fn coeff(&self, n: i64) -> Option<C> {
        if n > self.nmax {
            None
        } else if n < self.start {
            Some(C::zero())
        } else {
            Some(self.coeffs[(n - self.start) as usize].clone())
        }
    }

    /// Like [`coeff`](Self::coeff) but panics past the truncation bound.
    pub fn at(&self, n: i64) -> C {
        self.coeff(n)
            .unwrap_or_else(|| panic!("q^{n} lies beyond the truncation bound {}", self.nmax))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Exponent of the first nonzero stored coefficient.
    pub fn order(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.start + i as i64)
    }

    /// Drops information above `nmax`. Raising the bound is not possible.
    pub fn truncate(&self, nmax: i64) -> Result<Self> {
        if nmax > self.nmax {
            return Err(Error::Truncation(format!(
                "cannot extend a series known to q^{} up to q^{nmax}",
                self.nmax
            )));
        }
        Ok(Self::from_fn(self.start, nmax, |n| self.at(n)))
    }

    /// Re-expresses the series with a lower start exponent (padding exact zeros).
    pub fn with_start(&self, start: i64) -> Self {
        let start = start.min(self.start);
        Self::from_fn(start, self.nmax, |n| self.at(n))
    }

    pub fn map(&self, mut f: impl FnMut(i64, &C) -> C) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f(self.start + i as i64, c))
            .collect();
        QSeries {
            start: self.start,
            nmax: self.nmax,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let start = self.start.min(other.start);
        let nmax = self.nmax.min(other.nmax);
        Self::from_fn(start, nmax, |n| self.at(n) + other.at(n))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|_, c| -c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|_, c| c.clone() * s.clone())
    }

    /// Cauchy product. Start exponents add; the result is known up to
    /// `min(nmax_a + start_b, nmax_b + start_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let start = self.start + other.start;
        let nmax = (self.nmax + other.start).min(other.nmax + self.start);
        let len = (nmax - start + 1).max(0) as usize;
        let mut out = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        QSeries {
            start,
            nmax,
            coeffs: out,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.nmax - self.start);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Laurent division `self / other`.
    ///
    /// The divisor's first stored coefficient must be nonzero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let lead = other
            .coeffs
            .first()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| {
                Error::invalid("division by a series whose leading coefficient is zero")
            })?;
        let sb = other.start;
        let start = self.start - sb;
        let nmax = (self.nmax - sb).min(other.nmax + self.start - 2 * sb);
        let len = (nmax - start + 1).max(0) as usize;
        let mut out: Vec<C> = Vec::with_capacity(len);
        for e in 0..len {
            let mut acc = self.at(self.start + e as i64);
            for i in 1..=e {
                let b = &other.coeffs.get(i);
                if let Some(b) = b {
                    if !b.is_zero() {
                        acc = acc - (*b).clone() * out[e - i].clone();
                    }
                }
            }
            out.push(acc.divide(lead));
        }
        Ok(QSeries {
            start,
            nmax,
            coeffs: out,
        })
    }

    /// `(1 / 2 pi i) d/d tau`, i.e. `q^n -> n q^n` (negative `n` included).
    pub fn theta_derivative(&self) -> Self {
        self.map(|n, c| c.clone() * C::from_i64(n))
    }

    /// Substitutes `q -> q^k`.
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k >= 1);
        Self::from_fn(self.start * k, self.nmax * k, |n| {
            if n % k == 0 {
                self.at(n / k)
            } else {
                C::zero()
            }
        })
    }

    pub fn to_float(&self) -> FloatSeries {
        QSeries {
            start: self.start,
            nmax: self.nmax,
            coeffs: self.coeffs.iter().map(Coeff::to_f64).collect(),
        }
    }
}

impl FloatSeries {
    /// Largest coefficientwise difference over the common known range.
    pub fn max_abs_diff(&self, other: &FloatSeries) -> f64 {
        let lo = self.start.min(other.start);
        let hi = self.nmax.min(other.nmax);
        (lo..=hi)
            .map(|n| (self.at(n) - other.at(n)).abs())
            .fold(0.0, f64::max)
    }
}

impl<C: Coeff> fmt::Display for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = self.start + i as i64;
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match n {
                0 => write!(f, "{body}")?,
                1 if body == "1" => write!(f, "q")?,
                1 => write!(f, "{body}*q")?,
                _ if body == "1" => write!(f, "q^{n}")?,
                _ => write!(f, "{body}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.nmax + 1)
    }
}

/// A series whose coefficient mode is only known at run time (files, CLI).
#[derive(Clone, PartialEq, Debug)]
pub enum AnySeries {
    Exact(ExactSeries),
    Float(FloatSeries),
}

impl AnySeries {
    pub fn mode(&self) -> &'static str {
        match self {
            AnySeries::Exact(_) => BigRational::MODE,
            AnySeries::Float(_) => f64::MODE,
        }
    }

    pub fn start(&self) -> i64 {
        match self {
            AnySeries::Exact(s) => s.start(),
            AnySeries::Float(s) => s.start(),
        }
    }

    pub fn nmax(&self) -> i64 {
        match self {
            AnySeries::Exact(s) => s.nmax(),
            AnySeries::Float(s) => s.nmax(),
        }
    }

    fn mismatch(&self, other: &AnySeries) -> Error {
        Error::ModeMismatch {
            left: self.mode(),
            right: other.mode(),
        }
    }

    pub fn mul(&self, other: &AnySeries) -> Result<AnySeries> {
        match (self, other) {
            (AnySeries::Exact(a), AnySeries::Exact(b)) => Ok(AnySeries::Exact(a.mul(b))),
            (AnySeries::Float(a), AnySeries::Float(b)) => Ok(AnySeries::Float(a.mul(b))),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn add(&self, other: &AnySeries) -> Result<AnySeries> {
        match (self, other) {
            (AnySeries::Exact(a), AnySeries::Exact(b)) => Ok(AnySeries::Exact(a.add(b))),
            (AnySeries::Float(a), AnySeries::Float(b)) => Ok(AnySeries::Float(a.add(b))),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn to_float(&self) -> FloatSeries {
        match self {
            AnySeries::Exact(s) => s.to_float(),
            AnySeries::Float(s) => s.clone(),
        }
    }
}

impl From<ExactSeries> for AnySeries {
    fn from(s: ExactSeries) -> Self {
        AnySeries::Exact(s)
    }
}

impl From<FloatSeries> for AnySeries {
    fn from(s: FloatSeries) -> Self {
        AnySeries::Float(s)
    }
}

/// Convenience: exact series with integer coefficients.
pub fn exact_from_integers(start: i64, values: &[i64]) -> ExactSeries {
    let nmax = start + values.len() as i64 - 1;
    QSeries::from_fn(start, nmax, |n| {
        BigRational::from_integer(BigInt::from(values[(n - start) as usize]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn theta_derivative_handles_negative_exponents() {
        // q^-1 + 5 q^2
        let s = QSeries::from_fn(-1, 3, |n| match n {
            -1 => r(1, 1),
            2 => r(5, 1),
            _ => r(0, 1),
        });
        let d = s.theta_derivative();
        assert_eq!(d.at(-1), r(-1, 1));
        assert_eq!(d.at(2), r(10, 1));
        assert_eq!(d.at(0), r(0, 1));
    }

    #[test]
    fn q_times_inverse_q_is_one() {
        let q: ExactSeries = QSeries::monomial(1, r(1, 1), 6);
        let qinv: ExactSeries = QSeries::monomial(-1, r(1, 1), 6);
        let p = q.mul(&qinv);
        assert_eq!(p.at(0), r(1, 1));
        assert!((1..=p.nmax()).all(|n| p.at(n).is_zero()));
        assert_eq!(p.nmax(), 5);
    }

    #[test]
    fn reading_past_nmax_is_unknown() {
        let s: FloatSeries = QSeries::from_fn(0, 3, |n| n as f64);
        assert_eq!(s.coeff(4), None);
        assert_eq!(s.coeff(-2), Some(0.0));
        assert!(s.truncate(5).is_err());
    }

    #[test]
    fn modes_do_not_mix() {
        let a = AnySeries::Exact(QSeries::one(3));
        let b = AnySeries::Float(QSeries::one(3));
        assert!(matches!(a.mul(&b), Err(Error::ModeMismatch { .. })));
        assert!(a.add(&a).is_ok());
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = exact_from_integers(0, &[1, 3, -2, 7, 0, 5]);
        let b = exact_from_integers(1, &[2, -1, 4, 1, 1, 1]);
        let p = a.mul(&b);
        let back = p.div(&b).unwrap();
        for n in back.start()..=back.nmax() {
            assert_eq!(back.at(n), a.at(n));
        }
        let z = exact_from_integers(0, &[0, 1, 2]);
        assert!(a.div(&z).is_err());
    }

    #[test]
    fn display_reads_naturally() {
        let s = QSeries::from_fn(-1, 2, |n| match n {
            -1 => r(1, 1),
            2 => r(-1, 4),
            _ => r(0, 1),
        });
        assert_eq!(s.to_string(), "q^-1 - 1/4*q^2 + O(q^3)");
    }
}
