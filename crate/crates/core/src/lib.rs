//! Exponential sums modulo prime powers, Igusa local zeta functions and
//! audits of log-resolution numerical data.
//!
//! Everything is computed over `Z_p` with `p` odd. Sums are enumerated
//! exactly into integer histograms and only then evaluated in
//! double-double precision; zeta coefficients stay exact as elements of a
//! cyclotomic field.

pub mod charsum;
pub mod error;
pub mod expsum;
pub mod numeric;
pub mod poly;
pub mod resolution;
pub mod zeta;

pub use error::{Error, Result};
