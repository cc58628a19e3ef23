//! Arithmetic of logarithmic-order p-adic power series and the Frobenius
//! equation `(1 - λφ)F̃ = F`.

pub mod constants;
pub mod cyclotomic;
pub mod error;
pub mod family;
pub mod iwasawa;
pub mod json;
pub mod logseries;
pub mod operators;
pub mod padic;
pub mod sample;
pub mod solver;
pub mod valuation;

pub use error::{Error, Result};
pub use padic::PadicScalar;
pub use valuation::{Rational, Valuation};
pub use constants::{constants, GrowthConstants};
pub use cyclotomic::CyclotomicNumber;
pub use family::{FamilyOfPoints, FamilyReport};
pub use iwasawa::CycMeasure;
pub use logseries::{LogSeries, TailClass};
pub use solver::{SolveCase, SolveCertificate, SolveOptions, ToyCrystal};
