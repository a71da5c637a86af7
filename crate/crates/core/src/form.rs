//! Cusp forms described by where their coefficients come from, and the shared
//! coefficient tables the convolution code streams over.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, LazyLock, Mutex};

use crate::error::{Error, Result};
use crate::poincare::{lift_to_basis, PoincareSpec, SumControl};
use crate::qalg::basis::cusp_basis;
use crate::qalg::{cache, eta_power_f64, AnySeries, FloatSeries};

/// Origin of a form's coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum FormSource {
    /// `eta(scale tau)^power`.
    Eta { power: u32, scale: u32 },
    /// The Poincaré series `P(m, k, N)`, lifted to a built-in basis.
    Poincare { m: u64 },
    /// An `SCV1` coefficient file.
    File { path: PathBuf },
}

/// A cusp form of weight `k` on `Gamma_0(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormSpec {
    /// `None` only for files whose weight was not given.
    pub weight: Option<u32>,
    pub level: u64,
    pub source: FormSource,
}

impl FormSpec {
    pub fn eta(power: u32, scale: u32) -> Result<Self> {
        if power == 0 || scale == 0 || power % 2 == 1 {
            return Err(Error::invalid(format!(
                "eta:{power}:{scale} needs a positive even power and a positive scale"
            )));
        }
        crate::qalg::forms::eta_leading_exponent(power, scale)?;
        let g = gcd(24, power as u64);
        Ok(FormSpec {
            weight: Some(power / 2),
            level: scale as u64 * 24 / g,
            source: FormSource::Eta { power, scale },
        })
    }

    pub fn delta() -> Self {
        Self::eta(24, 1).expect("Delta is a valid eta power")
    }

    pub fn poincare(m: u64, k: u32, level: u64) -> Result<Self> {
        PoincareSpec::new(m, k, level)?;
        Ok(FormSpec {
            weight: Some(k),
            level,
            source: FormSource::Poincare { m },
        })
    }

    pub fn file(path: impl Into<PathBuf>, weight: Option<u32>, level: Option<u64>) -> Self {
        FormSpec {
            weight,
            level: level.unwrap_or(1),
            source: FormSource::File { path: path.into() },
        }
    }

    pub fn weight(&self) -> Result<u32> {
        self.weight.ok_or_else(|| {
            Error::invalid(format!(
                "the weight of {self} is unknown; write it as file:PATH:K[:N]"
            ))
        })
    }

    /// Stable identifier, used for cache keys.
    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Materializes coefficients `a(0..=nmax)` (reusing any cached table).
    pub fn table(&self, nmax: usize) -> Result<CoefficientTable> {
        CoefficientTable::build(self, nmax)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            FormSource::Eta { power, scale } => write!(f, "eta:{power}:{scale}"),
            FormSource::Poincare { m } => write!(
                f,
                "poincare:{m}:{}:{}",
                self.weight.unwrap_or_default(),
                self.level
            ),
            FormSource::File { path } => {
                write!(f, "file:{}", path.display())?;
                if let Some(k) = self.weight {
                    write!(f, ":{k}:{}", self.level)?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FormSpec {
    type Err = Error;

    /// Parses `eta:POWER:SCALE`, `poincare:M:K:N` or `file:PATH[:K[:N]]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse form spec `{s}`"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("file:") {
            let parts: Vec<&str> = rest.rsplitn(3, ':').collect();
            let numeric = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
            return Ok(match parts.as_slice() {
                [n, k, path] if numeric(n) && numeric(k) => {
                    FormSpec::file(*path, Some(num(k)? as u32), Some(num(n)?))
                }
                [k, ..] if numeric(k) => {
                    let path = &rest[..rest.len() - k.len() - 1];
                    FormSpec::file(path, Some(num(k)? as u32), None)
                }
                _ => FormSpec::file(rest, None, None),
            });
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["eta", p, sc] => FormSpec::eta(num(p)? as u32, num(sc)? as u32),
            ["poincare", m, k, n] => FormSpec::poincare(num(m)?, num(k)? as u32, num(n)?),
            _ => Err(bad()),
        }
    }
}

/// Float coefficients `a(0), a(1), ..., a(nmax)` of a cusp form, shared
/// immutably between threads and callers.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub label: String,
    /// Unknown only for files given without a weight.
    pub weight: Option<u32>,
    pub level: u64,
    coeffs: Arc<Vec<f64>>,
}

static TABLES: LazyLock<Mutex<HashMap<String, CoefficientTable>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Number of Poincaré coefficients matched when lifting beyond the basis dimension.
const EXTRA_PROBES: usize = 2;

impl CoefficientTable {
    /// Wraps explicit coefficients; `coeffs[n]` is `a(n)`.
    pub fn from_coeffs(label: impl Into<String>, weight: u32, level: u64, coeffs: Vec<f64>) -> Self {
        CoefficientTable {
            label: label.into(),
            weight: Some(weight),
            level,
            coeffs: Arc::new(coeffs),
        }
    }

    /// The table of a float series with no negative exponents.
    pub fn from_series(label: impl Into<String>, weight: u32, level: u64, s: &FloatSeries) -> Result<Self> {
        if s.start() < 0 {
            return Err(Error::invalid("cusp form tables cannot have negative exponents"));
        }
        let coeffs = (0..=s.nmax()).map(|n| s.at(n)).collect();
        Ok(Self::from_coeffs(label, weight, level, coeffs))
    }

    pub fn weight(&self) -> Result<u32> {
        self.weight.ok_or_else(|| {
            Error::invalid(format!(
                "the weight of {} is unknown; write it as file:PATH:K[:N]",
                self.label
            ))
        })
    }

    pub fn zero(weight: u32, level: u64, nmax: usize) -> Self {
        Self::from_coeffs("zero", weight, level, vec![0.0; nmax + 1])
    }

    pub fn nmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `a(n)`; zero for `n <= 0`, panics above `nmax`.
    #[inline]
    pub fn a(&self, n: i64) -> f64 {
        if n <= 0 {
            0.0
        } else {
            self.coeffs[n as usize]
        }
    }

    pub fn to_series(&self) -> FloatSeries {
        crate::qalg::QSeries::from_fn(0, self.nmax() as i64, |n| self.a(n))
    }

    pub fn scaled(&self, c: f64, label: impl Into<String>) -> Self {
        Self::from_coeffs(
            label,
            0,
            self.level,
            self.coeffs.iter().map(|v| v * c).collect(),
        )
        .with_weight(self.weight)
    }

    fn with_weight(mut self, weight: Option<u32>) -> Self {
        self.weight = weight;
        self
    }

    fn build(spec: &FormSpec, nmax: usize) -> Result<Self> {
        let label = spec.label();
        if let Some(t) = TABLES.lock().expect("table cache poisoned").get(&label) {
            if t.nmax() >= nmax {
                return Ok(t.clone());
            }
        }
        let disk = disk_cache_path(&label);
        if let Some(path) = &disk {
            if let Ok(AnySeries::Float(s)) = cache::load(path) {
                if s.nmax() >= nmax as i64 && s.start() >= 0 {
                    let t = Self::from_series(label.clone(), 0, spec.level, &s)?.with_weight(spec.weight);
                    remember(&t);
                    return Ok(t);
                }
            }
        }
        let series = compute(spec, nmax)?;
        let t = Self::from_series(label, 0, spec.level, &series)?.with_weight(spec.weight);
        if let Some(path) = &disk {
            // best effort: an unwritable cache directory only costs a rebuild
            let _ = cache::save(path, &AnySeries::Float(t.to_series()));
        }
        remember(&t);
        Ok(t)
    }
}

fn remember(t: &CoefficientTable) {
    TABLES
        .lock()
        .expect("table cache poisoned")
        .insert(t.label.clone(), t.clone());
}

fn disk_cache_path(label: &str) -> Option<PathBuf> {
    if label.starts_with("file:") {
        return None;
    }
    let dir = std::env::var_os("SCV_CACHE_DIR")?;
    let name: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    Some(Path::new(&dir).join(format!("{name}.scv")))
}

fn compute(spec: &FormSpec, nmax: usize) -> Result<FloatSeries> {
    match &spec.source {
        FormSource::Eta { power, scale } => eta_power_f64(*power, *scale, nmax as i64),
        FormSource::Poincare { m } => {
            let k = spec.weight()?;
            let pspec = PoincareSpec::with_control(*m, k, spec.level, SumControl::for_probes())?;
            let basis = cusp_basis(k, spec.level as u32, nmax as i64)?;
            let lift = lift_to_basis(&pspec, &basis, basis.len() + EXTRA_PROBES)?;
            Ok(lift.series)
        }
        FormSource::File { path } => {
            let s = cache::load(path)?.to_float();
            if s.nmax() < nmax as i64 {
                return Err(Error::Truncation(format!(
                    "{} holds coefficients to q^{}, {nmax} requested",
                    path.display(),
                    s.nmax()
                )));
            }
            Ok(s)
        }
    }
}
