//! Exact rational and cyclotomic arithmetic, double-double complex numbers
//! and truncated power series in `t`.

pub mod cyclo;
pub mod hp;
pub mod rational;
pub mod series;

pub use cyclo::CycloValue;
pub use hp::{Dd, HpComplex, RootTable};
pub use series::{series_coefficients, Expandable, RationalFunction, SeriesPrefix};
