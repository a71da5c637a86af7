//! Kloosterman sums and integer-order Bessel functions.

mod bessel;
mod kloosterman;

pub use bessel::{bessel, BesselKind, BesselQuery};
pub use kloosterman::{cache_len, kloosterman, kloosterman_uncached, KloostermanQuery};
