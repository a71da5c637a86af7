//! Truncated q-series and the classical modular forms built from them.

pub mod basis;
pub mod cache;
pub mod forms;
pub mod modular;
pub mod series;
pub mod sparse;

pub use forms::{
    delta, divisor_sum, e4sq_e6_over_delta, eisenstein, eta_power, eta_power_f64, j_function,
    level9_eisenstein_a, level9_eisenstein_b, r_series,
};
pub use series::{AnySeries, Coeff, ExactSeries, FloatSeries, QSeries};
