use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum BesselKind {
    J,
    I,
}

/// Integer-order Bessel function evaluation request.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselQuery {
    pub order: u32,
    pub x: f64,
    pub kind: BesselKind,
}

impl BesselQuery {
    pub fn j(order: u32, x: f64) -> Self {
        BesselQuery {
            order,
            x,
            kind: BesselKind::J,
        }
    }

    pub fn i(order: u32, x: f64) -> Self {
        BesselQuery {
            order,
            x,
            kind: BesselKind::I,
        }
    }
}

const MAX_TERMS: usize = 4000;
/// `I_nu(x)` overflows `f64` somewhat beyond this argument.
const MAX_I_ARGUMENT: f64 = 700.0;

fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}

/// Ascending series `sum_j (+-1)^j (x/2)^{2j+nu} / (j! (j+nu)!)`.
///
/// Returns the sum, the largest term magnitude, and whether the remainder
/// bound dropped below roundoff within `MAX_TERMS`.
fn ascending(order: u32, x: f64, alternating: bool) -> (f64, f64, bool) {
    let half = x / 2.0;
    let mut term = (order as f64 * half.ln() - ln_factorial(order)).exp();
    let mut sum = term;
    let mut biggest = term.abs();
    let sq = half * half;
    for j in 1..MAX_TERMS {
        let ratio = sq / (j as f64 * (j as f64 + order as f64));
        term *= if alternating { -ratio } else { ratio };
        sum += term;
        biggest = biggest.max(term.abs());
        // once the ratio is below 1/2 the remainder is at most the current term
        if ratio < 0.5 && term.abs() <= 1e-17 * sum.abs().max(f64::MIN_POSITIVE) {
            return (sum, biggest, true);
        }
        if term == 0.0 {
            return (sum, biggest, true);
        }
    }
    (sum, biggest, false)
}

/// Miller's backward recurrence for `J_nu(x)`, normalized by
/// `J_0 + 2 sum_k J_{2k} = 1`.
fn miller_j(order: u32, x: f64) -> f64 {
    let top = (order as f64).max(x);
    let mut start = (top + 30.0 + (50.0 * top).sqrt()) as usize;
    start += start % 2;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        // cur holds J_k up to scale, next holds J_{k+1}
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if k - 1 == order as usize {
            wanted = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    if order == 0 {
        wanted = cur;
    }
    norm += cur;
    wanted / norm
}

/// `J_nu(x)` or `I_nu(x)` for integer `nu >= 0` and `x >= 0`.
///
/// The ascending series is used whenever its cancellation stays below `tol`
/// relative to the result; otherwise `J` falls back to Miller's backward
/// recurrence. Fails with the partial value if neither reaches `tol`.
pub fn bessel(q: BesselQuery, tol: f64) -> Result<f64> {
    if !(q.x >= 0.0) || !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "Bessel needs x >= 0 and tol > 0 (x = {}, tol = {tol})",
            q.x
        )));
    }
    if q.x == 0.0 {
        return Ok(if q.order == 0 { 1.0 } else { 0.0 });
    }
    let what = || format!("Bessel {:?}_{}({})", q.kind, q.order, q.x);
    match q.kind {
        BesselKind::I => {
            if q.x > MAX_I_ARGUMENT {
                return Err(Error::NumericFailure {
                    what: what(),
                    partial: f64::INFINITY,
                    estimate: f64::INFINITY,
                });
            }
            let (sum, _, done) = ascending(q.order, q.x, false);
            if done {
                Ok(sum)
            } else {
                Err(Error::NumericFailure {
                    what: what(),
                    partial: sum,
                    estimate: sum.abs(),
                })
            }
        }
        BesselKind::J => {
            let (sum, biggest, done) = ascending(q.order, q.x, true);
            let roundoff = biggest * f64::EPSILON * 4.0;
            if done && roundoff <= tol * sum.abs() {
                return Ok(sum);
            }
            let v = miller_j(q.order, q.x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NumericFailure {
                    what: what(),
                    partial: sum,
                    estimate: roundoff,
                })
            }
        }
    }
}
