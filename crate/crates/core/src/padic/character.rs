use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{check_prime, PNorm, PRational};
use crate::error::{Error, Result};

/// `exp(2πi·num/den)` with the phase reduced exactly before the trig call.
/// Quarter turns are returned exactly.
pub fn root_of_unity(num: i128, den: u128) -> Complex64 {
    assert!(den > 0, "root of unity with zero order");
    let den_i = den as i128;
    let r = num.rem_euclid(den_i) as u128;
    if (4 * r) % den == 0 {
        return match (4 * r) / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    // Map to (-1/2, 1/2] so the argument of sin/cos stays small.
    let signed = if 2 * r > den {
        r as f64 - den as f64
    } else {
        r as f64
    };
    let angle = TAU * (signed / den as f64);
    Complex64::new(angle.cos(), angle.sin())
}

fn root_of_unity_rational(phase: &BigRational) -> Complex64 {
    match (phase.numer().to_i128(), phase.denom().to_u128()) {
        (Some(n), Some(d)) => root_of_unity(n, d),
        _ => {
            let frac = phase - phase.floor();
            let angle = TAU * frac.to_f64().unwrap_or(0.0);
            Complex64::new(angle.cos(), angle.sin())
        }
    }
}

/// The additive character `χₚ(x) = exp(2πi{x}ₚ)`.
pub fn chi(x: &PRational) -> Complex64 {
    root_of_unity_rational(&x.frac_part())
}

/// `p^z` on the principal branch `exp(z ln p)`; integer real exponents use
/// exact repeated multiplication.
pub fn ppow(p: u64, z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() <= 1000.0 {
        return Complex64::new((p as f64).powi(z.re as i32), 0.0);
    }
    (z * (p as f64).ln()).exp()
}

/// `|x|ₚ^z` for `|x|ₚ = p^e`.
pub fn norm_pow(p: u64, e: i64, z: Complex64) -> Complex64 {
    ppow(p, z * e as f64)
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, phi / q, p) != 1))
        .expect("every prime has a primitive root")
}

pub(crate) fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128 % m;
    let mut base = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Table `ind[u]` of discrete logarithms base the smallest primitive root,
/// for `u` in `1..p` (entry 0 is unused).
pub fn index_table(p: u64) -> Vec<u64> {
    let g = primitive_root(p);
    let mut table = vec![0u64; p as usize];
    let mut x = 1u64;
    for k in 0..p - 1 {
        table[x as usize] = k;
        x = x * g % p;
    }
    table
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterKind {
    Trivial,
    /// `π₁(x) = exp(2πi·r·ind_g(u mod p)/(p−1))` with `r ∈ 1..=p−2`.
    Tame {
        r: u64,
    },
}

/// A normed multiplicative character π₁ with `π₁(p) = 1`, trivial or of
/// conductor p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormedCharacter {
    pub p: u64,
    pub kind: CharacterKind,
}

impl NormedCharacter {
    pub fn trivial(p: u64) -> Self {
        NormedCharacter {
            p,
            kind: CharacterKind::Trivial,
        }
    }

    pub fn tame(p: u64, r: u64) -> Result<Self> {
        check_prime(p)?;
        if p < 3 || r == 0 || r > p - 2 {
            return Err(Error::Domain(format!(
                "tame character index must lie in 1..={} for p = {p}",
                p.saturating_sub(2)
            )));
        }
        Ok(NormedCharacter {
            p,
            kind: CharacterKind::Tame { r },
        })
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.kind, CharacterKind::Trivial)
    }

    /// Exponent `r` (0 for the trivial character).
    pub fn index(&self) -> u64 {
        match self.kind {
            CharacterKind::Trivial => 0,
            CharacterKind::Tame { r } => r,
        }
    }

    fn from_index(p: u64, r: u64) -> Self {
        let r = r % (p - 1).max(1);
        if r == 0 {
            Self::trivial(p)
        } else {
            NormedCharacter {
                p,
                kind: CharacterKind::Tame { r },
            }
        }
    }

    pub fn compose(&self, other: &NormedCharacter) -> Self {
        assert_eq!(self.p, other.p, "characters of different primes");
        Self::from_index(self.p, self.index() + other.index())
    }

    pub fn inverse(&self) -> Self {
        let order = (self.p - 1).max(1);
        Self::from_index(self.p, order - self.index() % order)
    }

    /// Exact phase `r·ind(u)/(p−1) mod 1` as `(num, den)` for the unit residue `u`.
    pub fn phase_at_residue(&self, u: u64, table: &[u64]) -> (u64, u64) {
        let order = (self.p - 1).max(1);
        let num = (self.index() * table[u as usize]) % order;
        let g = num.gcd(&order);
        (num / g, order / g)
    }

    /// Exact phase of `π₁(x)`; `None` at `x = 0`.
    pub fn phase(&self, x: &PRational) -> Option<(u64, u64)> {
        let u = x.unit_residue()?;
        if self.is_trivial() {
            return Some((0, 1));
        }
        Some(self.phase_at_residue(u, &index_table(self.p)))
    }

    /// Values `π₁(u)` indexed by the residue `u ∈ 0..p` (entry 0 unused).
    pub fn table(&self) -> Vec<Complex64> {
        if self.is_trivial() {
            return vec![Complex64::new(1.0, 0.0); self.p as usize];
        }
        let ind = index_table(self.p);
        (0..self.p)
            .map(|u| {
                if u == 0 {
                    Complex64::zero()
                } else {
                    let (n, d) = self.phase_at_residue(u, &ind);
                    root_of_unity(n as i128, d as u128)
                }
            })
            .collect()
    }

    pub fn eval(&self, x: &PRational) -> Result<Complex64> {
        let (n, d) = self
            .phase(x)
            .ok_or_else(|| Error::Domain("multiplicative character evaluated at 0".into()))?;
        Ok(root_of_unity(n as i128, d as u128))
    }
}

impl fmt::Display for NormedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CharacterKind::Trivial => write!(f, "trivial"),
            CharacterKind::Tame { r } => write!(f, "tame(r={r})"),
        }
    }
}

/// `π_α(x) = |x|ₚ^{α−1} π₁(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultCharacter {
    pub alpha: Complex64,
    pub pi1: NormedCharacter,
}

impl MultCharacter {
    pub fn new(alpha: Complex64, pi1: NormedCharacter) -> Self {
        MultCharacter { alpha, pi1 }
    }

    /// `|x|ₚ^{α−1}` with the trivial π₁.
    pub fn power(p: u64, alpha: Complex64) -> Self {
        MultCharacter {
            alpha,
            pi1: NormedCharacter::trivial(p),
        }
    }

    pub fn p(&self) -> u64 {
        self.pi1.p
    }

    pub fn eval(&self, x: &PRational) -> Result<Complex64> {
        match x.norm() {
            PNorm::Zero => Err(Error::Domain("π_α is undefined at 0".into())),
            PNorm::Pow(e) => Ok(norm_pow(self.p(), e, self.alpha - 1.0) * self.pi1.eval(x)?),
        }
    }

    /// `π·π'·|x|`, i.e. exponents add and characters compose.
    pub fn product_with_norm(&self, other: &MultCharacter) -> MultCharacter {
        MultCharacter {
            alpha: self.alpha + other.alpha,
            pi1: self.pi1.compose(&other.pi1),
        }
    }
}

/// Evaluates a multiplicative character.
pub fn eval_character(pi: &MultCharacter, x: &PRational) -> Result<Complex64> {
    pi.eval(x)
}
