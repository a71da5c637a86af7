use std::f64::consts::TAU;
use std::sync::LazyLock;

use dashmap::DashMap;

use crate::arith::mod_inverse;

/// Arguments of a Kloosterman sum `K(m, n, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KloostermanQuery {
    pub m: i64,
    pub n: i64,
    pub c: i64,
}

impl KloostermanQuery {
    pub fn new(m: i64, n: i64, c: i64) -> Self {
        assert!(c >= 1, "Kloosterman modulus must be positive, got {c}");
        KloostermanQuery { m, n, c }
    }

    fn key(self) -> (i64, i64, i64) {
        (self.m.rem_euclid(self.c), self.n.rem_euclid(self.c), self.c)
    }
}

static CACHE: LazyLock<DashMap<(i64, i64, i64), f64>> = LazyLock::new(DashMap::new);

/// `K(m, n, c) = sum_{v mod c, gcd(v, c) = 1} cos(2 pi (m v' + n v) / c)` with
/// `v v' = 1 mod c`.
///
/// The sine terms cancel under `v -> -v`, so only cosines are summed.
/// `K(m, n, 1) = 1`. Results are memoized by `(m mod c, n mod c, c)`.
pub fn kloosterman(q: KloostermanQuery) -> f64 {
    let key = q.key();
    if let Some(v) = CACHE.get(&key) {
        return *v;
    }
    let v = kloosterman_uncached(key.0, key.1, key.2);
    CACHE.insert(key, v);
    v
}

pub fn kloosterman_uncached(m: i64, n: i64, c: i64) -> f64 {
    if c == 1 {
        return 1.0;
    }
    let (m, n) = (m.rem_euclid(c), n.rem_euclid(c));
    let mut acc = 0.0;
    for v in 1..c {
        let Some(vbar) = mod_inverse(v, c) else {
            continue;
        };
        let phase = ((m as i128 * vbar as i128 + n as i128 * v as i128) % c as i128) as f64;
        acc += (TAU * phase / c as f64).cos();
    }
    acc
}

/// Number of memoized sums, for diagnostics.
pub fn cache_len() -> usize {
    CACHE.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn naive(m: i64, n: i64, c: i64) -> Complex64 {
        (0..c)
            .filter(|v| num_integer::Integer::gcd(v, &c) == 1 || c == 1)
            .map(|v| {
                let vbar = (0..c).find(|w| (v * w - 1).rem_euclid(c) == 0).unwrap_or(0);
                Complex64::from_polar(1.0, TAU * ((m * vbar + n * v) as f64) / c as f64)
            })
            .sum()
    }

    fn mobius(mut n: i64) -> i64 {
        let mut mu = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if n > 1 {
            -mu
        } else {
            mu
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(kloosterman(KloostermanQuery::new(1, 1, 1)), 1.0);
        assert!((kloosterman(KloostermanQuery::new(1, 1, 3)) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn ramanujan_sum_is_mobius() {
        for c in 1..80 {
            let k = kloosterman(KloostermanQuery::new(-1, 0, c));
            assert!((k - mobius(c) as f64).abs() < 1e-9, "c={c}: {k}");
        }
    }

    #[test]
    fn matches_complex_enumeration() {
        for c in 1..30 {
            for m in -4..5 {
                for n in 0..4 {
                    let z = naive(m, n, c);
                    assert!(z.im.abs() < 1e-10);
                    let k = kloosterman(KloostermanQuery::new(m, n, c));
                    assert!((k - z.re).abs() < 1e-9);
                }
            }
        }
    }
}
