use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qalg::FloatSeries;

/// Candidate terms for the correction `F` (weight-2 quasimodular or weakly
/// holomorphic series).
#[derive(Clone, Debug)]
pub struct CorrectionBasis {
    pub labels: Vec<String>,
    pub series: Vec<FloatSeries>,
}

impl CorrectionBasis {
    pub fn new(labels: Vec<String>, series: Vec<FloatSeries>) -> Result<Self> {
        if labels.len() != series.len() || labels.is_empty() {
            return Err(Error::invalid("correction basis needs one label per series"));
        }
        Ok(CorrectionBasis { labels, series })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }
}

/// Outcome of [`fit_correction`].
#[derive(Clone, Debug, Serialize)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    /// Standard errors of the coefficients under the supplied uncertainties.
    pub standard_errors: Vec<f64>,
    /// Largest `|lhs - rhs_mock - F|` over the fitted exponents.
    pub fit_residual: f64,
    /// Largest `|lhs - rhs_mock - F|` over the held-out exponents.
    pub predictive_residual: f64,
    pub h_range_fit: (i64, i64),
    pub h_range_test: (i64, i64),
    /// Condition number of the column-normalized weighted design matrix.
    pub condition: f64,
    #[serde(skip)]
    covariance: Vec<Vec<f64>>,
}

impl FitResult {
    /// The fitted correction evaluated at exponent `e`.
    pub fn correction_at(&self, basis: &CorrectionBasis, e: i64) -> f64 {
        basis
            .series
            .iter()
            .zip(&self.coefficients)
            .map(|(b, c)| c * b.at(e))
            .sum()
    }

    /// Standard error of the fitted correction at exponent `e`.
    pub fn correction_error_at(&self, basis: &CorrectionBasis, e: i64) -> f64 {
        let v: Vec<f64> = basis.series.iter().map(|b| b.at(e)).collect();
        let mut var = 0.0;
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                var += vi * self.covariance[i][j] * vj;
            }
        }
        var.max(0.0).sqrt()
    }
}

/// Largest acceptable condition number for the fit.
pub const MAX_CONDITION: f64 = 1e10;

/// Solves `lhs - rhs_mock = sum_i c_i basis_i` on `fit_range` by weighted
/// least squares and measures the mismatch on `test_range`.
///
/// `uncertainty` gives a standard error per exponent of `lhs - rhs_mock`;
/// rows are weighted by its inverse. Without it all rows weigh the same.
pub fn fit_correction(
    lhs: &FloatSeries,
    rhs_mock: &FloatSeries,
    basis: &CorrectionBasis,
    fit_range: RangeInclusive<i64>,
    test_range: RangeInclusive<i64>,
    uncertainty: Option<&FloatSeries>,
) -> Result<FitResult> {
    let known = lhs.nmax().min(rhs_mock.nmax());
    let known = basis.series.iter().map(|b| b.nmax()).fold(known, i64::min);
    if *fit_range.end() > known || *test_range.end() > known {
        return Err(Error::Truncation(format!(
            "fit needs exponents to {}, series known to {known}",
            fit_range.end().max(test_range.end())
        )));
    }
    if fit_range.is_empty() {
        return Err(Error::invalid("empty fit range"));
    }
    let rows: Vec<i64> = fit_range.clone().collect();
    let dim = basis.len();
    let sigma = |e: i64| uncertainty.map_or(1.0, |u| u.at(e));
    if rows.iter().any(|&e| !(sigma(e) > 0.0)) {
        return Err(Error::invalid("uncertainties must be positive on the fit range"));
    }
    let a = DMatrix::from_fn(rows.len(), dim, |i, j| basis.series[j].at(rows[i]) / sigma(rows[i]));
    let b = DVector::from_iterator(
        rows.len(),
        rows.iter().map(|&e| (lhs.at(e) - rhs_mock.at(e)) / sigma(e)),
    );
    let norms: Vec<f64> = (0..dim).map(|j| a.column(j).norm()).collect();
    if norms.contains(&0.0) {
        return Err(Error::RankDeficient("a basis series vanishes on the fit range".into()));
    }
    let scaled = DMatrix::from_fn(rows.len(), dim, |i, j| a[(i, j)] / norms[j]);
    let svd = scaled.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = if dim > rows.len() { 0.0 } else { svd.singular_values.min() };
    let condition = smax / smin;
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned {
            condition,
            context: format!("correction fit over {:?} with basis {:?}", fit_range, basis.labels),
        });
    }
    let y = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let coefficients: Vec<f64> = (0..dim).map(|j| y[j] / norms[j]).collect();
    let gram = scaled.transpose() * &scaled;
    let inv = gram
        .try_inverse()
        .ok_or_else(|| Error::RankDeficient("normal equations are singular".into()))?;
    let covariance: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| inv[(i, j)] / (norms[i] * norms[j])).collect())
        .collect();
    let standard_errors = (0..dim).map(|i| covariance[i][i].max(0.0).sqrt()).collect();
    let out = FitResult {
        coefficients,
        standard_errors,
        fit_residual: 0.0,
        predictive_residual: 0.0,
        h_range_fit: (*fit_range.start(), *fit_range.end()),
        h_range_test: (*test_range.start(), *test_range.end()),
        condition,
        covariance,
    };
    let resid = |e: i64| (lhs.at(e) - rhs_mock.at(e) - out.correction_at(basis, e)).abs();
    let fit_residual = fit_range.map(resid).fold(0.0, f64::max);
    let predictive_residual = test_range.map(resid).fold(0.0, f64::max);
    Ok(FitResult {
        fit_residual,
        predictive_residual,
        ..out
    })
}
