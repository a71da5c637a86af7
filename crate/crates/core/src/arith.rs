//! Small integer and rational helpers shared across modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
///
/// Returns `None` when `gcd(a, m) != 1`. For `m == 1` every residue is the
/// zero class and the inverse is `Some(0)`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    debug_assert!(m >= 1);
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

/// Generalized binomial coefficient `C(x, j) = x (x-1) ... (x-j+1) / j!`.
///
/// The upper index may be any integer; for negative `x` this is the
/// falling-factorial convention, e.g. `C(-1, j) = (-1)^j`.
pub fn binomial(x: i64, j: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j {
        num *= BigInt::from(x) - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn binomial_f64(x: i64, j: u64) -> f64 {
    binomial(x, j).to_f64().unwrap_or(f64::NAN)
}

/// `n!` as a float (exact below 23!).
pub fn factorial_f64(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Bernoulli numbers `B_0 .. B_n` (with `B_1 = -1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(m as i64 + 1, j as u64)) * bj;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Number of divisors of `n`.
pub fn divisor_count(n: u64) -> u64 {
    let mut count = 0;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    count
}

/// Constant `C` in the divisor bound `d(n) <= C n^{1/3}`, attained near n = 2520.
pub const DIVISOR_BOUND_CONSTANT: f64 = 3.53;

pub fn divisor_count_bound(n: f64) -> f64 {
    DIVISOR_BOUND_CONSTANT * n.max(1.0).cbrt()
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Rational to f64 that survives huge numerators and denominators.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let num = r.numer();
    let den = r.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    // scale so the quotient lands in a comfortable range, then restore
    let (n, d) = if shift > 0 {
        (num.clone(), den.clone() << (shift as usize))
    } else {
        (num.clone() << ((-shift) as usize), den.clone())
    };
    let q = BigRational::new(n << 64usize, d);
    let mant = q.to_integer().to_f64().unwrap_or(f64::NAN) / 2f64.powi(64);
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * mant.abs() * 2f64.powf(shift as f64)
}
