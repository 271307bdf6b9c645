//! Seeded random test functions for property checks and the self-test.

use num_complex::Complex64;
use rand::Rng;

use super::TestFunction;
use crate::grid::Grid;

/// Gaussian-integer coefficients in `[-bound, bound]`, so that coefficient sums
/// are exact in floating point.
pub fn integer(grid: Grid, bound: i64, rng: &mut impl Rng) -> TestFunction {
    TestFunction::from_fn(grid, |_| {
        Complex64::new(
            rng.gen_range(-bound..=bound) as f64,
            rng.gen_range(-bound..=bound) as f64,
        )
    })
}

/// Coefficients with real and imaginary parts uniform in `[-1, 1)`.
pub fn uniform(grid: Grid, rng: &mut impl Rng) -> TestFunction {
    TestFunction::from_fn(grid, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}
