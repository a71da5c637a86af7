//! Multi-prime number-theoretic transforms for exact integer series products.
//!
//! Each prime has the form `k 2^24 + 1` and lies below `2^62`, so Montgomery
//! products fit in `u128` and transforms of length up to `2^24` are available.
//! Results are recombined by Garner's algorithm directly into `f64`.

use num_bigint::BigInt;

/// `(prime, primitive root)` pairs.
pub const PRIMES: [(u64, u64); 6] = [
    (4611686018326724609, 3),
    (4611686018309947393, 5),
    (4611686018058289153, 5),
    (4611686017974403073, 3),
    (4611686017773076481, 3),
    (4611686017554972673, 5),
];

/// Montgomery arithmetic modulo one odd prime `p < 2^62`.
#[derive(Clone, Copy, Debug)]
pub struct Field {
    pub p: u64,
    neg_pinv: u64,
    r2: u64,
    root: u64,
}

impl Field {
    pub fn new(p: u64, root: u64) -> Self {
        // Newton iteration for p^{-1} mod 2^64
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Field {
            p,
            neg_pinv: inv.wrapping_neg(),
            r2,
            root,
        }
    }

    pub fn nth(i: usize) -> Self {
        let (p, g) = PRIMES[i];
        Field::new(p, g)
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Montgomery product of two Montgomery-form residues.
    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    /// Montgomery form of a signed integer.
    pub fn from_i128(&self, v: i128) -> u64 {
        let r = v.rem_euclid(self.p as i128) as u64;
        self.to_mont(r)
    }

    pub fn from_big(&self, v: &BigInt) -> u64 {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let r = v.mod_floor(&BigInt::from(self.p));
        self.to_mont(r.to_u64().expect("residue below p"))
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        self.from_i128(v as i128)
    }

    pub fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn ntt(&self, a: &mut [u64], invert: bool) {
        let n = a.len();
        debug_assert!(n.is_power_of_two());
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j ^= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let g = self.to_mont(self.root);
        let mut len = 2;
        while len <= n {
            let mut w = self.pow(g, (self.p - 1) / len as u64);
            if invert {
                w = self.inv(w);
            }
            let half = len / 2;
            let mut twiddles = Vec::with_capacity(half);
            let mut t = self.to_mont(1);
            for _ in 0..half {
                twiddles.push(t);
                t = self.mul(t, w);
            }
            for chunk in a.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for ((x, y), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                    let u = *x;
                    let v = self.mul(*y, tw);
                    *x = self.add(u, v);
                    *y = self.sub(u, v);
                }
            }
            len <<= 1;
        }
        if invert {
            let ninv = self.inv(self.to_mont(n as u64));
            for x in a.iter_mut() {
                *x = self.mul(*x, ninv);
            }
        }
    }

    /// Truncated product of two Montgomery-form coefficient vectors.
    pub fn convolve(&self, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
        let a = &a[..a.len().min(len)];
        let b = &b[..b.len().min(len)];
        if a.is_empty() || b.is_empty() {
            return vec![0; len];
        }
        if a.len().min(b.len()) <= 32 {
            let mut out = vec![0u64; len];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate().take(len - i) {
                    out[i + j] = self.add(out[i + j], self.mul(x, y));
                }
            }
            return out;
        }
        let size = (a.len() + b.len() - 1).min(2 * len).next_power_of_two();
        let mut fa = a.to_vec();
        fa.resize(size, 0);
        let mut fb = b.to_vec();
        fb.resize(size, 0);
        self.ntt(&mut fa, false);
        self.ntt(&mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = self.mul(*x, *y);
        }
        self.ntt(&mut fa, true);
        fa.truncate(len);
        fa.resize(len, 0);
        fa
    }
}

/// Residues of one integer sequence modulo each of several primes.
#[derive(Clone, Debug)]
pub struct Residues {
    pub fields: Vec<Field>,
    pub rows: Vec<Vec<u64>>,
}

impl Residues {
    pub fn from_fn(nprimes: usize, len: usize, f: impl Fn(&Field, usize) -> u64) -> Self {
        let fields: Vec<Field> = (0..nprimes).map(Field::nth).collect();
        let rows = fields
            .iter()
            .map(|fl| (0..len).map(|i| f(fl, i)).collect())
            .collect();
        Residues { fields, rows }
    }

    pub fn from_i128(nprimes: usize, values: &[i128]) -> Self {
        Self::from_fn(nprimes, values.len(), |fl, i| fl.from_i128(values[i]))
    }

    pub fn len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mul(&self, other: &Residues, len: usize) -> Residues {
        let rows = self
            .fields
            .iter()
            .zip(self.rows.iter().zip(&other.rows))
            .map(|(fl, (a, b))| fl.convolve(a, b, len))
            .collect();
        Residues {
            fields: self.fields.clone(),
            rows,
        }
    }

    /// `self + c * other`, elementwise.
    pub fn add_scaled(&self, other: &Residues, c: &BigInt) -> Residues {
        let rows = self
            .fields
            .iter()
            .zip(self.rows.iter().zip(&other.rows))
            .map(|(fl, (a, b))| {
                let cm = fl.from_big(c);
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| fl.add(x, fl.mul(cm, y)))
                    .collect()
            })
            .collect();
        Residues {
            fields: self.fields.clone(),
            rows,
        }
    }

    /// Centered integer value at index `i` as an exact `BigInt`.
    pub fn value_big(&self, i: usize) -> BigInt {
        let digits = self.garner().digits(self, i);
        let mut acc = BigInt::from(0);
        let mut modulus = BigInt::from(1);
        for (d, fl) in digits.iter().zip(&self.fields) {
            acc += &modulus * BigInt::from(*d);
            modulus *= BigInt::from(fl.p);
        }
        if &acc * 2 > modulus {
            acc - modulus
        } else {
            acc
        }
    }

    /// Centered integer values rounded to `f64`.
    ///
    /// Fails if some value needs the top prime, i.e. the prime count may be
    /// too small to represent the sequence without wraparound.
    pub fn to_f64(&self) -> Result<Vec<f64>, usize> {
        let g = self.garner();
        let r = self.fields.len();
        let top = self.fields[r - 1].p;
        (0..self.len())
            .map(|i| {
                let digits = g.digits(self, i);
                let negative = digits[r - 1] > top / 2;
                let guard = if negative { top - 1 } else { 0 };
                if r > 1 && digits[r - 1] != guard {
                    return Err(i);
                }
                // for negative values x - P = sum (d_k - (p_k - 1)) M_k - 1
                let mut total = 0.0;
                let mut radix = 1.0;
                for (k, &d) in digits.iter().enumerate() {
                    let p = self.fields[k].p;
                    let d = if negative {
                        -((p - 1 - d) as f64)
                    } else {
                        d as f64
                    };
                    total += d * radix;
                    radix *= p as f64;
                }
                Ok(if negative { total - 1.0 } else { total })
            })
            .collect()
    }

    fn garner(&self) -> Garner {
        let r = self.fields.len();
        let mut inv = Vec::with_capacity(r);
        let mut pmod = vec![vec![0u64; r]; r];
        for k in 0..r {
            let pk = self.fields[k].p as u128;
            let mut m: u128 = 1;
            for j in 0..k {
                pmod[j][k] = (self.fields[j].p as u128 % pk) as u64;
                m = m * pmod[j][k] as u128 % pk;
            }
            let fk = &self.fields[k];
            inv.push(fk.from_mont(fk.inv(fk.to_mont(m as u64))));
        }
        Garner { inv, pmod }
    }
}

struct Garner {
    inv: Vec<u64>,
    pmod: Vec<Vec<u64>>,
}

impl Garner {
    /// Mixed-radix digits of the residue vector at index `i`.
    fn digits(&self, res: &Residues, i: usize) -> Vec<u64> {
        let r = res.fields.len();
        let mut digits: Vec<u64> = Vec::with_capacity(r);
        for k in 0..r {
            let fk = &res.fields[k];
            let pk = fk.p as u128;
            let x = fk.from_mont(res.rows[k][i]) as u128;
            // Horner evaluation of the lower digits modulo p_k
            let mut acc: u128 = 0;
            for j in (0..k).rev() {
                acc = (acc * self.pmod[j][k] as u128 + digits[j] as u128) % pk;
            }
            let diff = (x + pk - acc) % pk;
            digits.push((diff * self.inv[k] as u128 % pk) as u64);
        }
        digits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_support_the_transform() {
        for (i, &(p, g)) in PRIMES.iter().enumerate() {
            assert_eq!((p - 1) % (1 << 24), 0);
            assert!(p < 1 << 62);
            let f = Field::nth(i);
            let gm = f.to_mont(g);
            // g has full order: g^((p-1)/2) = -1
            assert_eq!(f.from_mont(f.pow(gm, (p - 1) / 2)), p - 1);
        }
    }

    #[test]
    fn convolution_matches_schoolbook() {
        let f = Field::nth(0);
        let a: Vec<i64> = (0..100).map(|i| (i * 37 % 23) - 11).collect();
        let b: Vec<i64> = (0..90).map(|i| (i * 17 % 13) - 6).collect();
        let am: Vec<u64> = a.iter().map(|&v| f.from_i64(v)).collect();
        let bm: Vec<u64> = b.iter().map(|&v| f.from_i64(v)).collect();
        let got = f.convolve(&am, &bm, 150);
        for n in 0..150 {
            let want: i64 = (0..=n)
                .filter(|&i| i < a.len() && n - i < b.len())
                .map(|i| a[i] * b[n - i])
                .sum();
            assert_eq!(f.from_mont(got[n]), want.rem_euclid(f.p as i64) as u64);
        }
    }

    #[test]
    fn crt_recovers_large_signed_integers() {
        let big = BigInt::from(3).pow(150);
        let vals = [big.clone(), -big.clone(), BigInt::from(-7), BigInt::from(0)];
        let res = Residues::from_fn(6, vals.len(), |fl, i| {
            fl.from_big(&vals[i])
        });
        for (i, v) in vals.iter().enumerate() {
            assert_eq!(&res.value_big(i), v);
            let want: f64 = v.to_string().parse().unwrap();
            let got = res.to_f64().unwrap()[i];
            assert!((got - want).abs() <= 1e-15 * want.abs(), "{got} vs {want}");
        }
    }
}
