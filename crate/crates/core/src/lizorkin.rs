//! Membership tests and projections for the Lizorkin spaces of the first kind
//! (`Φ_×`, `Ψ_×`) and the second kind (`Φ`, `Ψ`).
//!
//! A test function is stored through finitely many coefficients, so every
//! integral involved is a finite sum. "Zero" means zero up to the rounding
//! bound of that sum (plus the caller's tolerance); for data with exactly
//! representable values such as small Gaussian integers the test is exact.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::padic::{PNorm, PRational};
use crate::schwartz::TestFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LizorkinKind {
    /// `Φ_×`: every partial integral `∫φ dx_j` vanishes.
    FirstKind,
    /// `Φ`: the total integral vanishes.
    SecondKind,
}

impl fmt::Display for LizorkinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LizorkinKind::FirstKind => "first kind",
            LizorkinKind::SecondKind => "second kind",
        })
    }
}

impl std::str::FromStr for LizorkinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" | "first-kind" | "1" => Ok(LizorkinKind::FirstKind),
            "second" | "second-kind" | "2" => Ok(LizorkinKind::SecondKind),
            _ => Err(Error::Parse(format!(
                "unknown Lizorkin kind '{s}' (expected first or second)"
            ))),
        }
    }
}

/// The integral that failed to vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// Integrated coordinate (0-based) for the first kind, `None` for the total integral.
    pub axis: Option<usize>,
    /// Multi-index of the remaining coordinates, in grid order with `axis` removed.
    pub fiber: Vec<u64>,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Rounding bound for a sum of `terms` values of total magnitude `mass`.
fn rounding_slack(terms: usize, mass: f64) -> f64 {
    8.0 * f64::EPSILON * terms as f64 * mass
}

/// Sums of the coefficient tensor along `axis`; the result is indexed by the
/// remaining coordinates in grid order.
fn axis_sums(coeffs: &[Complex64], side: usize, n: usize, axis: usize) -> Vec<Complex64> {
    let stride = side.pow((n - 1 - axis) as u32);
    let outer = coeffs.len() / (side * stride);
    let mut out = vec![Complex64::zero(); outer * stride];
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * side * stride + inner;
            out[o * stride + inner] = (0..side).map(|t| coeffs[base + t * stride]).sum();
        }
    }
    out
}

/// Multi-index of the `n−1` remaining coordinates from a flat index of [`axis_sums`].
fn fiber_index(grid: &Grid, flat: usize) -> Vec<u64> {
    let side = grid.side();
    let mut m = vec![0u64; grid.n - 1];
    let mut rest = flat;
    for j in (0..grid.n - 1).rev() {
        m[j] = (rest % side) as u64;
        rest /= side;
    }
    m
}

/// Whether `φ ∈ Φ` (second kind) or `φ ∈ Φ_×` (first kind), with a witness on failure.
pub fn is_phi(phi: &TestFunction, kind: LizorkinKind, tol: f64) -> Membership {
    let grid = *phi.grid();
    let mass: f64 = phi.coeffs().iter().map(|c| c.norm()).sum();
    match kind {
        LizorkinKind::SecondKind => {
            let value = phi.integrate();
            let bound = tol + rounding_slack(grid.cells(), mass * grid.cell_measure());
            if value.norm() <= bound {
                Membership {
                    holds: true,
                    witness: None,
                }
            } else {
                Membership {
                    holds: false,
                    witness: Some(Witness {
                        axis: None,
                        fiber: vec![],
                        value,
                    }),
                }
            }
        }
        LizorkinKind::FirstKind => {
            let axis_measure = (grid.p as f64).powi(grid.l as i32);
            let bound = tol + rounding_slack(grid.cells(), mass * axis_measure);
            for axis in 0..grid.n {
                let sums = axis_sums(phi.coeffs(), grid.side(), grid.n, axis);
                if let Some((flat, s)) = sums
                    .iter()
                    .enumerate()
                    .find(|(_, s)| (**s * axis_measure).norm() > bound)
                {
                    return Membership {
                        holds: false,
                        witness: Some(Witness {
                            axis: Some(axis),
                            fiber: fiber_index(&grid, flat),
                            value: *s * axis_measure,
                        }),
                    };
                }
            }
            Membership {
                holds: true,
                witness: None,
            }
        }
    }
}

/// Whether `ψ ∈ Ψ` (vanishes on the cell of zero) or `ψ ∈ Ψ_×` (vanishes on
/// every cell touching a coordinate hyperplane).
pub fn is_psi(psi: &TestFunction, kind: LizorkinKind, tol: f64) -> bool {
    let grid = *psi.grid();
    let bound = tol + rounding_slack(grid.cells(), psi.sup_norm());
    match kind {
        LizorkinKind::SecondKind => psi.value_at_zero().norm() <= bound,
        LizorkinKind::FirstKind => (0..grid.cells()).all(|flat| {
            psi.coeffs()[flat].norm() <= bound || grid.multi_index(flat).iter().all(|&m| m != 0)
        }),
    }
}

/// Fails with a membership error naming the violated characterization.
pub fn require_phi(phi: &TestFunction, kind: LizorkinKind) -> Result<()> {
    let m = is_phi(phi, kind, 0.0);
    match m.witness {
        None => Ok(()),
        Some(w) => Err(Error::Lizorkin {
            kind: kind.to_string(),
            reason: match w.axis {
                None => format!("total integral is {} instead of 0", fmt_complex(w.value)),
                Some(j) => format!(
                    "partial integral over x_{} is {} on the fiber {:?} instead of 0",
                    j + 1,
                    fmt_complex(w.value),
                    w.fiber
                ),
            },
        }),
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// Result of [`project`]: `φ_t` together with `‖φ_t − φ‖₂`.
#[derive(Clone, Debug)]
pub struct Projection {
    pub function: TestFunction,
    pub distance: f64,
}

/// `φ_t = F[(1 − Δ_t) F⁻¹[φ]]`: removes the spectrum of `φ` in the ball
/// `|ξ|ₚ ≤ 1/|t|ₚ` (second kind) or in the slabs `|ξ_j|ₚ ≤ 1/|t|ₚ` (first kind).
pub fn project(phi: &TestFunction, kind: LizorkinKind, t: &PRational) -> Result<Projection> {
    if t.p() != phi.p() {
        return Err(Error::PrimeMismatch(t.p(), phi.p()));
    }
    let k = match t.norm() {
        PNorm::Zero => return Err(Error::Domain("projection parameter t = 0".into())),
        PNorm::Pow(k) => k,
    };
    let g = *phi.grid();
    // The killed radius p^{−k} must be resolved on the spectral grid (−N, −l).
    let base = phi.regrid(g.l, g.big_n.max(k))?;
    let spec = base.inverse_fourier();
    let sg = *spec.grid();
    let axis_norms = sg.axis_norm_table();
    let killed = |m: u64| axis_norms[m as usize].map_or(true, |e| e <= -k);
    let coeffs = (0..sg.cells())
        .map(|flat| {
            let m = sg.multi_index(flat);
            let kill = match kind {
                LizorkinKind::SecondKind => m.iter().all(|&mj| killed(mj)),
                LizorkinKind::FirstKind => m.iter().any(|&mj| killed(mj)),
            };
            if kill {
                Complex64::zero()
            } else {
                spec.coeffs()[flat]
            }
        })
        .collect();
    let function = TestFunction::from_coeffs(sg, coeffs)?.fourier();
    let distance = function.sub(phi)?.l2_norm();
    Ok(Projection { function, distance })
}

/// Random member of the requested space with Gaussian-integer coefficients in
/// `[-bound, bound]` before the correction that enforces membership.
///
/// Second kind: the coefficient at the zero cell absorbs the total. First
/// kind: a random tensor of shape `(side−1)ⁿ` is differenced along every axis,
/// which makes every fiber sum telescope to zero.
pub fn random_phi(
    grid: Grid,
    kind: LizorkinKind,
    bound: i64,
    rng: &mut impl Rng,
) -> Result<TestFunction> {
    if grid.depth() == 0 {
        return Err(Error::Domain(format!(
            "a grid with l = N has no nonzero Lizorkin functions of the {kind}"
        )));
    }
    let mut draw = || {
        Complex64::new(
            rng.gen_range(-bound..=bound) as f64,
            rng.gen_range(-bound..=bound) as f64,
        )
    };
    match kind {
        LizorkinKind::SecondKind => {
            let mut coeffs: Vec<Complex64> = (0..grid.cells()).map(|_| draw()).collect();
            let rest: Complex64 = coeffs[1..].iter().sum();
            coeffs[0] = -rest;
            TestFunction::from_coeffs(grid, coeffs)
        }
        LizorkinKind::FirstKind => {
            let side = grid.side();
            let n = grid.n;
            let mut shape = vec![side - 1; n];
            let mut data: Vec<Complex64> = (0..(side - 1).pow(n as u32)).map(|_| draw()).collect();
            for axis in 0..n {
                data = difference_along(&data, &shape, axis);
                shape[axis] = side;
            }
            TestFunction::from_coeffs(grid, data)
        }
    }
}

/// `b_0 = a_0`, `b_i = a_i − a_{i−1}`, `b_last = −a_last` along one axis of a
/// row-major tensor, growing that axis by one.
fn difference_along(data: &[Complex64], shape: &[usize], axis: usize) -> Vec<Complex64> {
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::zero(); outer * (len + 1) * inner];
    for o in 0..outer {
        for i in 0..inner {
            let at = |t: usize| data[(o * len + t) * inner + i];
            for t in 0..=len {
                let prev = if t > 0 { at(t - 1) } else { Complex64::zero() };
                let cur = if t < len { at(t) } else { Complex64::zero() };
                out[(o * (len + 1) + t) * inner + i] = cur - prev;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn coset_pair() -> TestFunction {
        let zero = PVector::scalar(PRational::from_int(2, 0).unwrap());
        let one = PVector::scalar(PRational::from_int(2, 1).unwrap());
        let a = TestFunction::indicator_coset(&zero, 1).unwrap();
        let b = TestFunction::indicator_coset(&one, 1).unwrap();
        a.sub(&b).unwrap()
    }

    #[test]
    fn second_kind_examples() {
        let phi = coset_pair();
        assert!(is_phi(&phi, LizorkinKind::SecondKind, 0.0).holds);
        let psi = phi.fourier();
        assert!(is_psi(&psi, LizorkinKind::SecondKind, 0.0));
        // F[φ](ξ) = (1/2)(1 − χ₂(ξ)) vanishes on ℤ₂
        for m in 0..psi.grid().side() as u64 {
            let xi = psi.grid().representative(m as usize);
            if xi.norm() <= PNorm::Pow(0) {
                assert_eq!(psi.coeff(&[m]), c(0.0));
            }
        }

        let omega = TestFunction::omega(2, 1).unwrap();
        let m = is_phi(&omega, LizorkinKind::SecondKind, 0.0);
        assert!(!m.holds);
        assert_eq!(m.witness.unwrap().value, c(1.0));
        assert!(!is_psi(&omega, LizorkinKind::SecondKind, 0.0));
        assert!(require_phi(&omega, LizorkinKind::SecondKind).is_err());
    }

    #[test]
    fn first_kind_witness_names_fiber() {
        let grid = Grid::new(3, 2, 0, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let phi = random_phi(grid, LizorkinKind::SecondKind, 3, &mut rng).unwrap();
        let m = is_phi(&phi, LizorkinKind::FirstKind, 0.0);
        assert!(!m.holds);
        let w = m.witness.unwrap();
        assert_eq!(w.fiber.len(), 1);
        let e = require_phi(&phi, LizorkinKind::FirstKind).unwrap_err();
        assert_eq!(e.code(), "lizorkin-membership");
    }

    #[test]
    fn random_members_and_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, n, l, big_n) in [(2, 1, -2, 2), (3, 2, 0, 2), (2, 2, -1, 1), (5, 1, 0, 2)] {
            let grid = Grid::new(p, n, l, big_n).unwrap();
            for kind in [LizorkinKind::FirstKind, LizorkinKind::SecondKind] {
                let phi = random_phi(grid, kind, 4, &mut rng).unwrap();
                assert!(is_phi(&phi, kind, 0.0).holds);
                assert!(is_psi(&phi.fourier(), kind, 0.0));
                assert!(is_psi(&phi.inverse_fourier(), kind, 0.0));
            }
            let first = random_phi(grid, LizorkinKind::FirstKind, 4, &mut rng).unwrap();
            assert!(is_phi(&first, LizorkinKind::SecondKind, 0.0).holds);
        }
    }

    #[test]
    fn projection_of_omega() {
        let omega = TestFunction::omega(2, 1).unwrap();
        let t = PRational::from_ratio(2, 1, 2).unwrap();
        let proj = project(&omega, LizorkinKind::SecondKind, &t).unwrap();
        let expected = omega
            .sub(&TestFunction::indicator_ball(2, 1, 1).unwrap().scale(c(0.5)))
            .unwrap();
        assert!(proj.function.max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(proj.function.integrate().norm() < 1e-15);
        assert!(is_phi(&proj.function, LizorkinKind::SecondKind, 0.0).holds);

        let mut last = f64::INFINITY;
        for k in 1..=4 {
            let t = PRational::p_power(2, -k).unwrap();
            let d = project(&omega, LizorkinKind::SecondKind, &t)
                .unwrap()
                .distance;
            assert!((d - 2f64.powf(-k as f64 / 2.0)).abs() < 1e-14);
            assert!(d < last);
            last = d;
        }
    }

    #[test]
    fn projection_fixes_members_with_clean_spectrum() {
        let phi = coset_pair();
        // F⁻¹[φ] vanishes on ℤ₂, so killing B_{−k} for k ≥ 0 changes nothing.
        for k in [0, 1, 3] {
            let t = PRational::p_power(2, -k).unwrap();
            let proj = project(&phi, LizorkinKind::SecondKind, &t).unwrap();
            assert!(proj.distance < 1e-15);
        }
        assert!(project(&phi, LizorkinKind::SecondKind, &PRational::zero(2).unwrap()).is_err());
    }

    #[test]
    fn first_kind_projection_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let grid = Grid::new(3, 2, -1, 1).unwrap();
        let phi = crate::schwartz::random::integer(grid, 5, &mut rng);
        for k in [-1, 0, 2] {
            let t = PRational::p_power(3, -k).unwrap();
            let proj = project(&phi, LizorkinKind::FirstKind, &t).unwrap();
            assert!(
                is_phi(&proj.function, LizorkinKind::FirstKind, 0.0).holds,
                "k = {k}"
            );
        }
    }

    #[test]
    fn depth_zero_has_no_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let grid = Grid::new(2, 1, 0, 0).unwrap();
        assert!(random_phi(grid, LizorkinKind::SecondKind, 1, &mut rng).is_err());
    }
}
