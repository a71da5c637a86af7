//! `SCV1` binary coefficient files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "SCV1" | mode: u64 (0 exact, 1 float) | start: i64 | nmax: i64 | coefficients
//! ```
//!
//! A float coefficient is an `f64`. An exact coefficient is a numerator and
//! denominator pair of `i64`; when either part does not fit, the pair
//! `(i64::MIN, 0)` is written instead, followed by the numerator and the
//! denominator as a `u64` byte length and that many two's-complement bytes.

use std::io::{Read, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::series::{AnySeries, QSeries};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"SCV1";
const MODE_EXACT: u64 = 0;
const MODE_FLOAT: u64 = 1;

fn write_big(w: &mut impl Write, v: &BigInt) -> Result<()> {
    let bytes = v.to_signed_bytes_le();
    w.write_all(&(bytes.len() as u64).to_le_bytes())?;
    w.write_all(&bytes)?;
    Ok(())
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Format(format!("truncated file: {e}")))?;
    Ok(u64::from_le_bytes(buf))
}

fn read_i64(r: &mut impl Read) -> Result<i64> {
    read_u64(r).map(|v| v as i64)
}

fn read_big(r: &mut impl Read) -> Result<BigInt> {
    let len = read_u64(r)?;
    if len > 1 << 24 {
        return Err(Error::Format(format!("implausible integer length {len}")));
    }
    let mut buf = vec![0u8; len as usize];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Format(format!("truncated integer: {e}")))?;
    Ok(BigInt::from_signed_bytes_le(&buf))
}

/// Serializes a series into `w`.
pub fn write_series(w: &mut impl Write, series: &AnySeries) -> Result<()> {
    w.write_all(MAGIC)?;
    let mode = match series {
        AnySeries::Exact(_) => MODE_EXACT,
        AnySeries::Float(_) => MODE_FLOAT,
    };
    w.write_all(&mode.to_le_bytes())?;
    w.write_all(&series.start().to_le_bytes())?;
    w.write_all(&series.nmax().to_le_bytes())?;
    match series {
        AnySeries::Float(s) => {
            for c in s.coeffs() {
                w.write_all(&c.to_le_bytes())?;
            }
        }
        AnySeries::Exact(s) => {
            for c in s.coeffs() {
                match (c.numer().to_i64(), c.denom().to_i64()) {
                    (Some(n), Some(d)) if n != i64::MIN => {
                        w.write_all(&n.to_le_bytes())?;
                        w.write_all(&d.to_le_bytes())?;
                    }
                    _ => {
                        w.write_all(&i64::MIN.to_le_bytes())?;
                        w.write_all(&0i64.to_le_bytes())?;
                        write_big(w, c.numer())?;
                        write_big(w, c.denom())?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Parses a series from `r`.
pub fn read_series(r: &mut impl Read) -> Result<AnySeries> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|e| Error::Format(format!("missing header: {e}")))?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mode = read_u64(r)?;
    let start = read_i64(r)?;
    let nmax = read_i64(r)?;
    let count = nmax - start + 1;
    if !(0..=1 << 32).contains(&count) && nmax >= start {
        return Err(Error::Format(format!("implausible range {start}..={nmax}")));
    }
    let count = count.max(0) as usize;
    match mode {
        MODE_FLOAT => {
            let mut coeffs = Vec::with_capacity(count);
            for _ in 0..count {
                coeffs.push(f64::from_bits(read_u64(r)?));
            }
            Ok(AnySeries::Float(QSeries::new(start, nmax, coeffs)?))
        }
        MODE_EXACT => {
            let mut coeffs = Vec::with_capacity(count);
            for _ in 0..count {
                let n = read_i64(r)?;
                let d = read_i64(r)?;
                let (n, d) = if n == i64::MIN && d == 0 {
                    (read_big(r)?, read_big(r)?)
                } else {
                    (BigInt::from(n), BigInt::from(d))
                };
                if d.is_zero() {
                    return Err(Error::Format("zero denominator".into()));
                }
                coeffs.push(BigRational::new(n, d));
            }
            Ok(AnySeries::Exact(QSeries::new(start, nmax, coeffs)?))
        }
        other => Err(Error::Format(format!("unknown coefficient mode {other}"))),
    }
}

pub fn save(path: &Path, series: &AnySeries) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_series(&mut w, series)?;
    w.flush()?;
    Ok(())
}

pub fn load(path: &Path) -> Result<AnySeries> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    read_series(&mut r)
}
