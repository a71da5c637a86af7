use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::rational_to_f64;

/// Closest rational to `x` with denominator at most `max_denominator`, and
/// its distance from `x`.
///
/// Walks the continued fraction of `x` (read exactly from its binary value)
/// and compares the last admissible convergent with the best semiconvergent.
pub fn rational_snap(x: f64, max_denominator: u64) -> (BigRational, f64) {
    assert!(max_denominator >= 1, "max_denominator must be positive");
    assert!(x.is_finite(), "cannot snap {x}");
    let target = BigRational::from_float(x).expect("finite float");
    let best = limit_denominator(&target.abs(), &BigInt::from(max_denominator));
    let best = if x < 0.0 { -best } else { best };
    let dist = rational_to_f64(&(&best - &target).abs());
    (best, dist)
}

fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let r = &n - &a * &d;
        (n, d) = (d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0).div_floor(&q1);
    let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = BigRational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}
