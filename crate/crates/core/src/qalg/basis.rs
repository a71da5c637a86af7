//! Cusp form bases in echelon form.
//!
//! Level one uses Miller's basis: the products `Delta^j E_4^a E_6^b` of weight
//! `k`, reduced so that the `i`-th element is `q^i + O(q^{d+1})`. Long
//! expansions are computed exactly modulo several primes and only converted
//! to floating point at the end, because the reduction cancels many digits.

use num_traits::Zero;

use super::forms::{delta, eisenstein, eta_power_f64};
use super::modular::{Field, Residues, PRIMES};
use super::series::{ExactSeries, FloatSeries, QSeries};
use super::sparse::eta_product_i128;
use crate::error::{Error, Result};

/// Dimension of the weight-`k` cusp forms on the full modular group.
pub fn level1_cusp_dimension(k: u32) -> usize {
    if k < 12 || k % 2 == 1 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// Exponents `(j, a, b)` of the Miller generators `Delta^j E_4^a E_6^b`.
fn miller_rows(k: u32) -> Vec<(u32, u32, u32)> {
    (1..=level1_cusp_dimension(k) as u32)
        .map(|j| {
            let w = k - 12 * j;
            if w % 4 == 2 {
                (j, (w - 6) / 4, 1)
            } else {
                (j, w / 4, 0)
            }
        })
        .collect()
}

fn check_level1(k: u32) -> Result<usize> {
    let d = level1_cusp_dimension(k);
    if d == 0 {
        return Err(Error::invalid(format!(
            "there are no level-1 cusp forms of weight {k}"
        )));
    }
    Ok(d)
}

/// Echelon basis of level-1 cusp forms of weight `k`, exact, for modest `nmax`.
pub fn level1_cusp_basis_exact(k: u32, nmax: i64) -> Result<Vec<ExactSeries>> {
    let d = check_level1(k)?;
    let n = nmax.max(d as i64);
    let dl = delta(n);
    let e4 = eisenstein(4, n)?;
    let e6 = eisenstein(6, n)?;
    let mut rows: Vec<ExactSeries> = miller_rows(k)
        .into_iter()
        .map(|(j, a, b)| {
            let mut s = dl.pow(j);
            for _ in 0..a {
                s = s.mul(&e4);
            }
            for _ in 0..b {
                s = s.mul(&e6);
            }
            s.truncate(n).expect("factors are known to n")
        })
        .collect();
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = rows[i].at(j as i64 + 1);
            if !c.is_zero() {
                rows[i] = rows[i].sub(&rows[j].scale(&c));
            }
        }
    }
    rows.into_iter().map(|r| r.truncate(nmax)).collect()
}

fn sigma_residues(nprimes: usize, weight: u32, scale: i64, len: usize) -> Residues {
    let fields: Vec<Field> = (0..nprimes).map(Field::nth).collect();
    let rows = fields
        .iter()
        .map(|fl| {
            let p = fl.p as u128;
            let mut acc = vec![0u64; len];
            for dv in 1..len {
                let mut pw: u128 = 1;
                for _ in 0..weight {
                    pw = pw * dv as u128 % p;
                }
                for m in (dv..len).step_by(dv) {
                    acc[m] = ((acc[m] as u128 + pw) % p) as u64;
                }
            }
            acc.iter()
                .enumerate()
                .map(|(n, &v)| {
                    if n == 0 {
                        fl.to_mont(1)
                    } else {
                        fl.mul(fl.to_mont(v), fl.from_i64(scale))
                    }
                })
                .collect()
        })
        .collect();
    Residues { fields, rows }
}

/// Echelon basis of level-1 cusp forms of weight `k` as float series.
///
/// All products and the echelon reduction are carried out exactly modulo
/// `PRIMES.len()` primes, so the only rounding is the final conversion.
pub fn level1_cusp_basis_f64(k: u32, nmax: i64) -> Result<Vec<FloatSeries>> {
    let d = check_level1(k)?;
    let nmax = nmax.max(d as i64);
    let len = nmax as usize + 1;
    let nprimes = PRIMES.len();
    let mut dl = vec![0i128; len];
    let prod = eta_product_i128(24, 1, len - 1)
        .ok_or_else(|| Error::invalid("Delta coefficients overflow i128 at this length"))?;
    dl[1..].copy_from_slice(&prod);
    let dres = Residues::from_i128(nprimes, &dl);
    let e4 = sigma_residues(nprimes, 3, 240, len);
    let e6 = sigma_residues(nprimes, 5, -504, len);
    let mut rows: Vec<Residues> = miller_rows(k)
        .into_iter()
        .map(|(j, a, b)| {
            let mut s = dres.clone();
            for _ in 1..j {
                s = s.mul(&dres, len);
            }
            for _ in 0..a {
                s = s.mul(&e4, len);
            }
            for _ in 0..b {
                s = s.mul(&e6, len);
            }
            s
        })
        .collect();
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = rows[i].value_big(j + 1);
            if !c.is_zero() {
                rows[i] = rows[i].add_scaled(&rows[j], &-c);
            }
        }
    }
    rows.iter()
        .map(|r| {
            let coeffs = r.to_f64().map_err(|i| {
                Error::invalid(format!(
                    "coefficient of q^{i} exceeds the multi-prime capacity"
                ))
            })?;
            QSeries::new(0, nmax, coeffs)
        })
        .collect()
}

/// `S_4(Gamma_0(9))`, spanned by `eta(3 tau)^8`.
pub fn level9_weight4_basis(nmax: i64) -> Result<Vec<FloatSeries>> {
    Ok(vec![eta_power_f64(8, 3, nmax)?])
}

/// Built-in cusp form bases keyed by `(weight, level)`.
pub fn cusp_basis(k: u32, level: u32, nmax: i64) -> Result<Vec<FloatSeries>> {
    match level {
        1 => level1_cusp_basis_f64(k, nmax),
        9 if k == 4 => level9_weight4_basis(nmax),
        _ => Err(Error::invalid(format!(
            "no built-in cusp form basis for weight {k} and level {level}"
        ))),
    }
}

/// Exact counterpart of [`cusp_basis`] for small truncations.
pub fn cusp_basis_exact(k: u32, level: u32, nmax: i64) -> Result<Vec<ExactSeries>> {
    match level {
        1 => level1_cusp_basis_exact(k, nmax),
        9 if k == 4 => Ok(vec![super::forms::eta_power(8, 3, nmax)?]),
        _ => Err(Error::invalid(format!(
            "no built-in cusp form basis for weight {k} and level {level}"
        ))),
    }
}
