//! Exact calculus of test functions, distributions and fractional operators
//! over the p-adic field ℚₚⁿ.

mod args;
pub mod asymptotics;
pub mod cyclotomic;
pub mod distributions;
pub mod error;
pub mod grid;
pub mod lizorkin;
pub mod operators;
pub mod padic;
pub mod schwartz;
pub mod selftest;
pub mod special;
pub mod wavelets;

pub use args::parse_complex;
pub use distributions::{CatalogEntry, Distribution, EntryKind};
pub use error::{Error, Result};
pub use grid::Grid;
pub use lizorkin::LizorkinKind;
pub use num_complex::Complex64;
pub use padic::{MultCharacter, NormedCharacter, PNorm, PRational, PVector};
pub use schwartz::TestFunction;
pub use special::{beta_p, gamma_p, gamma_p_char, gamma_p_n, GammaValue};
