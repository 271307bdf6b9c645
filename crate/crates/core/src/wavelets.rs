//! Kozyrev wavelets on ℚₚ,
//! `Θ_{γja}(x) = p^{−γ/2} χₚ(p^{−1} j (p^γ x − a)) Ω(|p^γ x − a|ₚ)`,
//! their Gram matrices and the eigenvalue relation `D^α Θ = p^{α(1−γ)} Θ`.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lizorkin::LizorkinKind;
use crate::operators::{apply, Symbol};
use crate::padic::{chi, ppow, PNorm, PRational};
use crate::schwartz::TestFunction;

/// Index `(γ, j, a)` with `j ∈ [1, p−1]` and `a` a canonical representative
/// of `ℚₚ/ℤₚ`, i.e. a rational `k/p^d ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveletIndex {
    pub gamma: i64,
    pub j: u64,
    pub a: PRational,
}

impl WaveletIndex {
    pub fn new(gamma: i64, j: u64, a: PRational) -> Result<Self> {
        let p = a.p();
        if j == 0 || j >= p {
            return Err(Error::Domain(format!(
                "wavelet index j = {j} is outside [1, {}]",
                p - 1
            )));
        }
        if a.to_parts().is_none() || &a.frac_part() != a.value() {
            return Err(Error::Domain(format!(
                "wavelet shift a = {a} is not a canonical representative k/{p}^d in [0, 1)"
            )));
        }
        Ok(WaveletIndex { gamma, j, a })
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    /// `d` with `a = k/p^d`, `p ∤ k` (0 for `a = 0`).
    pub fn depth(&self) -> u32 {
        self.a.to_parts().map_or(0, |(_, e)| e)
    }

    /// `p^{α(1−γ)}`.
    pub fn eigenvalue(&self, alpha: Complex64) -> Complex64 {
        ppow(self.p(), alpha * (1 - self.gamma) as f64)
    }

    /// The tightest grid on which `Θ` is exactly locally constant:
    /// constancy radius `p^{γ−1}`, support inside `B_{γ+d}`.
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(
            self.p(),
            1,
            self.gamma - 1,
            self.gamma + self.depth() as i64,
        )
    }
}

impl fmt::Display for WaveletIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(gamma={}, j={}, a={})", self.gamma, self.j, self.a)
    }
}

/// All indices with `γ` in `gammas`, every `j`, and `a = k/p^depth`, `0 ≤ k < p^depth`.
pub fn enumerate(
    p: u64,
    gammas: impl IntoIterator<Item = i64>,
    depth: u32,
) -> Result<Vec<WaveletIndex>> {
    let period = p
        .checked_pow(depth)
        .filter(|&q| q <= 1 << 20)
        .ok_or_else(|| {
            Error::Domain(format!(
                "shift depth {depth} enumerates more than 2^20 shifts"
            ))
        })?;
    let mut out = Vec::new();
    for gamma in gammas {
        for j in 1..p {
            for k in 0..period {
                let a = PRational::from_int(p, k as i64)?.mul_p_power(-(depth as i64));
                out.push(WaveletIndex::new(gamma, j, a)?);
            }
        }
    }
    Ok(out)
}

/// `Θ_{γja}` on its own grid, evaluated exactly at every coset representative.
pub fn kozyrev(idx: &WaveletIndex) -> Result<TestFunction> {
    let grid = idx.grid()?;
    let p = idx.p();
    let height = (p as f64).powf(-(idx.gamma as f64) / 2.0);
    let j = PRational::from_int(p, idx.j as i64)?;
    let coeffs = (0..grid.cells())
        .map(|flat| {
            let x = grid.representative(flat).coords()[0].clone();
            let y = &x.mul_p_power(idx.gamma) - &idx.a;
            if y.norm() > PNorm::Pow(0) {
                Complex64::zero()
            } else {
                chi(&(&j * &y).mul_p_power(-1)) * height
            }
        })
        .collect();
    TestFunction::from_coeffs(grid, coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenReport {
    pub eigenvalue: Complex64,
    /// `‖D^αΘ − p^{α(1−γ)}Θ‖∞ / ‖Θ‖∞`.
    pub residual: f64,
}

pub fn eigencheck(idx: &WaveletIndex, alpha: Complex64) -> Result<EigenReport> {
    let theta = kozyrev(idx)?;
    let image = apply(
        &Symbol::taibleson(idx.p(), 1, alpha)?,
        &theta,
        LizorkinKind::SecondKind,
    )?;
    let eigenvalue = idx.eigenvalue(alpha);
    let residual = image.max_abs_diff(&theta.scale(eigenvalue))? / theta.sup_norm();
    Ok(EigenReport {
        eigenvalue,
        residual,
    })
}

/// `G[r][s] = ⟨Θ_r, Θ_s⟩ = ∫ Θ_r conj(Θ_s)`.
pub fn gram(indices: &[WaveletIndex]) -> Result<Vec<Vec<Complex64>>> {
    for (r, a) in indices.iter().enumerate() {
        if indices[..r].contains(a) {
            return Err(Error::Domain(format!("repeated wavelet index {a}")));
        }
    }
    let waves: Vec<TestFunction> = indices.iter().map(kozyrev).collect::<Result<_>>()?;
    let m = waves.len();
    let entries: Vec<Result<Complex64>> = (0..m * m)
        .into_par_iter()
        .map(|k| waves[k / m].inner(&waves[k % m]))
        .collect();
    let flat: Vec<Complex64> = entries.into_iter().collect::<Result<_>>()?;
    Ok(flat
        .chunks(m.max(1))
        .take(m)
        .map(<[Complex64]>::to_vec)
        .collect())
}

/// `max |G − I|` over all entries.
pub fn identity_deviation(g: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (r, row) in g.iter().enumerate() {
        for (s, v) in row.iter().enumerate() {
            let target = if r == s { 1.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    worst
}
