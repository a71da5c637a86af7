//! Integer eta products by repeated dense-times-sparse passes.
//!
//! `prod (1 - q^n)^3` has only `~sqrt(2 N)` nonzero terms up to `q^N`, so a
//! pass costs `O(N sqrt N)` and no dense convolution is ever formed.

use num_bigint::BigInt;
use num_traits::Zero;

/// Sparse series as `(exponent, coefficient)` pairs in increasing exponent order.
pub type Sparse = Vec<(usize, i64)>;

/// `prod_{n>=1} (1 - q^{scale n})^3 = sum_k (-1)^k (2k+1) q^{scale k(k+1)/2}`.
pub fn eta_cubed_sparse(scale: usize, len: usize) -> Sparse {
    let mut out = Vec::new();
    for k in 0usize.. {
        let e = scale * k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.push((e, sign * (2 * k as i64 + 1)));
    }
    out
}

/// Euler's pentagonal series `prod_{n>=1} (1 - q^{scale n})`.
pub fn pentagonal_sparse(scale: usize, len: usize) -> Sparse {
    let mut out = vec![(0usize, 1i64)];
    for k in 1usize.. {
        let e1 = scale * k * (3 * k - 1) / 2;
        if e1 >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.push((e1, sign));
        let e2 = scale * k * (3 * k + 1) / 2;
        if e2 < len {
            out.push((e2, sign));
        }
    }
    out.sort_unstable();
    out
}

fn pass_i128(dense: &[i128], sparse: &Sparse) -> Option<Vec<i128>> {
    let len = dense.len();
    let mut out = vec![0i128; len];
    for &(e, c) in sparse {
        let c = c as i128;
        for (o, d) in out[e..].iter_mut().zip(dense) {
            *o = o.checked_add(d.checked_mul(c)?)?;
        }
    }
    Some(out)
}

fn pass_big(dense: &[BigInt], sparse: &Sparse) -> Vec<BigInt> {
    let len = dense.len();
    let mut out = vec![BigInt::zero(); len];
    for &(e, c) in sparse {
        for (o, d) in out[e..].iter_mut().zip(dense) {
            if !d.is_zero() {
                *o += d * c;
            }
        }
    }
    out
}

fn factors(power: u32, scale: usize, len: usize) -> Vec<Sparse> {
    let cubes = eta_cubed_sparse(scale, len);
    let single = pentagonal_sparse(scale, len);
    let mut out = vec![cubes; (power / 3) as usize];
    out.extend(std::iter::repeat_n(single, (power % 3) as usize));
    out
}

/// Coefficients of `prod_{n>=1} (1 - q^{scale n})^power` for exponents `0..len`,
/// or `None` if an intermediate value leaves the `i128` range.
pub fn eta_product_i128(power: u32, scale: usize, len: usize) -> Option<Vec<i128>> {
    let mut dense = vec![0i128; len];
    if len == 0 {
        return Some(dense);
    }
    dense[0] = 1;
    for f in factors(power, scale, len) {
        dense = pass_i128(&dense, &f)?;
    }
    Some(dense)
}

/// Same product with arbitrary-size integers.
pub fn eta_product_big(power: u32, scale: usize, len: usize) -> Vec<BigInt> {
    let mut dense = vec![BigInt::zero(); len];
    if len == 0 {
        return dense;
    }
    dense[0] = BigInt::from(1);
    for f in factors(power, scale, len) {
        dense = pass_big(&dense, &f);
    }
    dense
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(power: u32, scale: usize, len: usize) -> Vec<i128> {
        let mut p = vec![0i128; len];
        p[0] = 1;
        for n in 1.. {
            let e = n * scale;
            if e >= len {
                break;
            }
            for _ in 0..power {
                for i in (e..len).rev() {
                    p[i] -= p[i - e];
                }
            }
        }
        p
    }

    #[test]
    fn passes_agree_with_repeated_multiplication() {
        for (power, scale) in [(1, 1), (3, 1), (8, 3), (24, 1), (5, 2)] {
            let got = eta_product_i128(power, scale, 80).unwrap();
            assert_eq!(got, brute(power, scale, 80), "power {power} scale {scale}");
            let big = eta_product_big(power, scale, 80);
            assert!(big.iter().zip(&got).all(|(b, g)| *b == BigInt::from(*g)));
        }
    }

    #[test]
    fn jacobi_support_is_triangular() {
        let s = eta_cubed_sparse(1, 30);
        let exps: Vec<usize> = s.iter().map(|p| p.0).collect();
        assert_eq!(exps, vec![0, 1, 3, 6, 10, 15, 21, 28]);
    }
}
