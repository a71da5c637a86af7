//! Symmetrized shifted convolution series of cusp forms and the mock modular
//! forms that explain their special values.
//!
//! The crate is layered bottom-up:
//!
//! * [`qalg`]: truncated q-series (exact or float), eta products, Eisenstein
//!   series, `j`, cusp form bases, and the `SCV1` coefficient file format.
//! * [`specialfun`]: Kloosterman sums and the Bessel functions `J` and `I`.
//! * [`poincare`]: Fourier coefficients of Poincaré series and of the
//!   holomorphic part of Maass-Poincaré series.
//! * [`form`]: cusp forms described by eta products, Poincaré series or files,
//!   materialized as shared coefficient tables.
//! * [`shiftconv`]: the (symmetrized) shifted convolution series and their
//!   generating function.
//! * [`rcproj`]: Rankin-Cohen brackets and projected brackets.
//! * [`verify`]: end-to-end checks of the three worked examples.
//!
//! ```
//! use scv::qalg::eta_power;
//!
//! let delta = eta_power(24, 1, 3).unwrap();
//! assert_eq!(delta.to_string(), "q - 24*q^2 + 252*q^3 + O(q^4)");
//! ```

pub mod arith;
pub mod error;
pub mod form;
pub mod poincare;
pub mod qalg;
pub mod rcproj;
pub mod shiftconv;
pub mod specialfun;
pub mod verify;

pub use error::{Error, Result};
