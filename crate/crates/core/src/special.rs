//! The p-adic Γ and Β functions.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::cyclotomic::RootSum;
use crate::error::{Error, Result};
use crate::padic::{index_table, ppow, MultCharacter, NormedCharacter};

/// Denominators `|1 − p^{−α}|` below this are reported as poles.
pub const POLE_THRESHOLD: f64 = 1e-12;

/// Largest root-of-unity order for which vanishing sphere sums are re-verified exactly.
const EXACT_CHECK_ORDER: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaValue {
    Value(Complex64),
    /// Pole at `α = μ_j = 2πij/ln p`.
    Pole {
        j: i64,
    },
}

impl GammaValue {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            GammaValue::Value(v) => Some(*v),
            GammaValue::Pole { .. } => None,
        }
    }

    pub fn into_result(self, p: u64) -> Result<Complex64> {
        match self {
            GammaValue::Value(v) => Ok(v),
            GammaValue::Pole { j } => Err(Error::Pole { p, j }),
        }
    }
}

/// `Some(j)` when `α` lies within the pole threshold of `μ_j = 2πij/ln p`.
pub fn pole_index(p: u64, alpha: Complex64) -> Option<i64> {
    let d = Complex64::new(1.0, 0.0) - ppow(p, -alpha);
    (d.norm() < POLE_THRESHOLD).then(|| (alpha.im * (p as f64).ln() / TAU).round() as i64)
}

/// `Γₚ(α) = (1 − p^{α−1})/(1 − p^{−α})`.
pub fn gamma_p(p: u64, alpha: Complex64) -> GammaValue {
    gamma_p_n(p, 1, alpha)
}

/// `Γₚ⁽ⁿ⁾(α) = (1 − p^{α−n})/(1 − p^{−α})`.
pub fn gamma_p_n(p: u64, n: usize, alpha: Complex64) -> GammaValue {
    if let Some(j) = pole_index(p, alpha) {
        return GammaValue::Pole { j };
    }
    let one = Complex64::new(1.0, 0.0);
    GammaValue::Value((one - ppow(p, alpha - n as f64)) / (one - ppow(p, -alpha)))
}

/// Exact rational value of `Γₚ⁽ⁿ⁾(k)` for an integer `k ≠ 0`.
pub fn gamma_p_n_exact(p: u64, n: usize, k: i64) -> Option<BigRational> {
    if k == 0 {
        return None;
    }
    let pow = |e: i64| -> BigRational {
        let b = BigInt::from(p);
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(b, e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(b, (-e) as usize))
        }
    };
    let one = BigRational::one();
    Some((&one - pow(k - n as i64)) / (&one - pow(-k)))
}

/// `∫_{|x|ₚ = p^γ} π₁(x) χₚ(x) dx = measure · sum`, with the sum held exactly.
#[derive(Clone, Debug)]
pub struct SphereIntegral {
    pub gamma: i64,
    pub sum: RootSum,
    pub measure: f64,
}

impl SphereIntegral {
    pub fn value(&self) -> Complex64 {
        self.sum.to_complex() * self.measure
    }
}

/// Sphere integral of `π₁χₚ` for a tame or trivial π₁ (one dimension).
///
/// For `γ ≤ 0` the additive character is 1 on the sphere and the integral is
/// `p^{γ−1} Σ_{u=1}^{p−1} π₁(u)`. For `γ ≥ 1` the sphere splits into the
/// cosets `u/p^γ + ℤₚ` (`p ∤ u`), each of measure 1.
pub fn sphere_integral(pi1: &NormedCharacter, gamma: i64) -> SphereIntegral {
    let p = pi1.p;
    let ind = index_table(p);
    let r = pi1.index();
    let order_char = (p - 1).max(1);
    if gamma <= 0 {
        let mut sum = RootSum::new(order_char);
        for u in 1..p {
            sum.add_term((r * ind[u as usize]) as i128, 1);
        }
        return SphereIntegral {
            gamma,
            sum,
            measure: (p as f64).powi((gamma - 1) as i32),
        };
    }
    let modulus = p.pow(gamma as u32);
    let order = order_char * modulus;
    let mut sum = RootSum::new(order);
    for u in (1..modulus).filter(|u| u % p != 0) {
        let char_part = (r * ind[(u % p) as usize]) as i128 * modulus as i128;
        let add_part = u as i128 * order_char as i128;
        sum.add_term(char_part + add_part, 1);
    }
    SphereIntegral {
        gamma,
        sum,
        measure: 1.0,
    }
}

/// The Gauss-type sum `G(π₁) = ∫_{|x|ₚ = p} π₁(x) χₚ(x) dx`.
pub fn gauss_sum(pi1: &NormedCharacter) -> SphereIntegral {
    sphere_integral(pi1, 1)
}

/// `Γₚ(π_α) = ∫ |x|ₚ^{α−1} π₁(x) χₚ(x) dx`.
pub fn gamma_p_char(pi: &MultCharacter) -> GammaValue {
    let p = pi.p();
    if pi.pi1.is_trivial() {
        return gamma_p(p, pi.alpha);
    }
    // Only the sphere |x| = p survives; the inner spheres share the vanishing
    // unit-sphere sum and the outer ones cancel along each residue class mod p.
    debug_assert!(sphere_integral(&pi.pi1, 0).sum.is_zero());
    if (p - 1) * p * p <= EXACT_CHECK_ORDER {
        debug_assert!(sphere_integral(&pi.pi1, 2).sum.is_zero());
    }
    GammaValue::Value(ppow(p, pi.alpha - 1.0) * gauss_sum(&pi.pi1).value())
}

/// `Βₚ(π¹_α, π²_β) = Γₚ(π¹_α) Γₚ(π²_β) / Γₚ(π¹_α π²_β |x|ₚ)`.
pub fn beta_p(a: &MultCharacter, b: &MultCharacter) -> Result<Complex64> {
    let p = a.p();
    if b.p() != p {
        return Err(Error::PrimeMismatch(p, b.p()));
    }
    let ga = gamma_p_char(a).into_result(p)?;
    let gb = gamma_p_char(b).into_result(p)?;
    let gab = gamma_p_char(&a.product_with_norm(b)).into_result(p)?;
    if gab.norm() < POLE_THRESHOLD {
        return Err(Error::Domain(format!(
            "Γₚ of the product character vanishes at α+β = {}",
            a.alpha + b.alpha
        )));
    }
    Ok(ga * gb / gab)
}

/// Renders an exact rational the way the command line prints it.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
