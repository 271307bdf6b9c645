//! Closed-form distributions. Every entry pairs with a test function on grid
//! `(l, N)` through a weight vector `W` on the same grid, `⟨f, φ⟩ = Σ W_m c_m`.
//!
//! Nonzero cells lie strictly inside a sphere `|x|ₚ = p^e` with `e > l`, so
//! every kernel is constant there. Regularized kernels subtract `φ(0)` inside
//! `B₀`; that subtraction (including the spheres of `B₀` outside `B_N`), the
//! spheres `1 ≤ γ ≤ l` covered by the zero cell and the constant `I₀` all land
//! on the weight of the zero cell.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Distribution, Homogeneity};
use crate::args::SpecString;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::padic::{ppow, MultCharacter, NormedCharacter};
use crate::special::pole_index;

#[derive(Clone, Debug, PartialEq)]
pub enum EntryKind {
    /// `δ(x)`.
    Delta,
    /// The constant function `c`.
    Constant(Complex64),
    /// `π_α(x) = |x|ₚ^{α−1} π₁(x)`, one dimension.
    PiAlpha(MultCharacter),
    /// `π_α(x) log_p^m |x|ₚ`, one dimension.
    PiAlphaLog { pi: MultCharacter, m: u32 },
    /// `P(log_p^{m−1}|x|ₚ / |x|ₚ)`, one dimension, `m ≥ 1`.
    PLogOverAbs { m: u32 },
    /// `|x|ₚ^{α−n}`.
    AbsAlphaMinusN(Complex64),
    /// `P(1/|x|ₚⁿ)`.
    PInvAbsN,
    /// `ln |x|ₚ`.
    LogAbs,
    /// `f_α(z) = |z|ₚ^{α−1}/Γₚ(α)` and its limits, one dimension.
    RieszF(Complex64),
    /// `f_{α₁}(x₁) × ⋯ × f_{αₙ}(xₙ)`.
    MultiRiesz(Vec<Complex64>),
    /// `κ_α(x) = |x|ₚ^{α−n}/Γₚ⁽ⁿ⁾(α)` and its limits.
    RieszKappa(Complex64),
    /// Tensor product of one-dimensional entries, one per coordinate.
    Tensor(Vec<EntryKind>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub p: u64,
    pub n: usize,
    pub kind: EntryKind,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn binomial(m: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Coefficients `a_1..a_{k+1}` of `Σ_{i=1}^{s} i^k = Σ_d a_d s^d`.
pub fn faulhaber_coefficients(k: u32) -> Vec<f64> {
    let k = k as usize;
    let binom = |n: usize, r: usize| -> BigInt {
        (0..r).fold(BigInt::one(), |acc, i| {
            acc * BigInt::from(n - i) / BigInt::from(i + 1)
        })
    };
    // Bernoulli numbers with B₁ = +1/2.
    let mut bern: Vec<BigRational> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        if m == 0 {
            bern.push(BigRational::one());
            continue;
        }
        let s: BigRational = (0..m)
            .map(|j| BigRational::from_integer(binom(m + 1, j)) * &bern[j])
            .sum();
        bern.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    if k >= 1 {
        bern[1] = BigRational::new(BigInt::one(), BigInt::from(2));
    }
    (1..=k + 1)
        .map(|d| {
            let j = k + 1 - d;
            let v = BigRational::from_integer(binom(k + 1, j)) * &bern[j]
                / BigRational::from_integer(BigInt::from(k + 1));
            v.to_f64().unwrap_or(f64::NAN)
        })
        .collect()
}

/// `I₀(α; m) = ∫_{B₀} |x|ₚ^{α−1} log_p^m|x|ₚ dx = (1−1/p)(−1)^m Σ_{k≥0} k^m q^k`
/// with `q = p^{−α}`, continued analytically through the Eulerian numerators.
pub fn i0_log(p: u64, alpha: Complex64, m: u32) -> Result<Complex64> {
    if let Some(j) = pole_index(p, alpha) {
        return Err(Error::Pole { p, j });
    }
    let q = ppow(p, -alpha);
    // S_m(q) = N_m(q)/(1−q)^{m+1}, N_0 = 1, N_m = q(N'_{m−1}(1−q) + m N_{m−1}).
    let mut num: Vec<f64> = vec![1.0];
    for step in 1..=m {
        let deriv: Vec<f64> = num
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| i as f64 * a)
            .collect();
        let mut next = vec![0.0; num.len() + 1];
        for (i, a) in deriv.iter().enumerate() {
            next[i + 1] += a;
            next[i + 2] -= a;
        }
        for (i, a) in num.iter().enumerate() {
            next[i + 1] += step as f64 * a;
        }
        num = next;
    }
    let value = num
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, a| acc * q + a);
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let pf = p as f64;
    Ok(value / (Complex64::new(1.0, 0.0) - q).powu(m + 1) * (1.0 - 1.0 / pf) * sign)
}

/// Cell-kernel table: value of the kernel on every nonzero cell.
fn cell_values(
    grid: &Grid,
    k: impl Fn(usize, i64) -> Complex64,
) -> (Vec<Complex64>, Vec<Option<i64>>) {
    let norms = grid.cell_norm_exponents();
    let vals = norms
        .iter()
        .enumerate()
        .map(|(flat, e)| match e {
            Some(e) => k(flat, *e),
            None => Complex64::zero(),
        })
        .collect();
    (vals, norms)
}

/// Weights of `∫_{B₀} k(φ − φ(0)) + ∫_{ℚₚⁿ∖B₀} kφ + φ(0)·i0`, where `shell(γ)`
/// is `∫_{|x|=p^γ} k`.
fn regularized(
    grid: &Grid,
    k: impl Fn(usize, i64) -> Complex64,
    shell: impl Fn(i64) -> Complex64,
    i0: Complex64,
) -> Vec<Complex64> {
    let meas = grid.cell_measure();
    let (vals, norms) = cell_values(grid, k);
    let mut w: Vec<Complex64> = vals.iter().map(|v| v * meas).collect();
    let inside: Complex64 = w
        .iter()
        .zip(&norms)
        .filter(|(_, e)| matches!(e, Some(e) if *e <= 0))
        .map(|(v, _)| *v)
        .sum();
    // Spheres inside B₀ beyond the support carry φ − φ(0) = −φ(0).
    let uncovered: Complex64 = (grid.big_n + 1..=0).map(&shell).sum();
    let covered: Complex64 = (1..=grid.l).map(&shell).sum();
    w[0] = i0 + covered - inside - uncovered;
    w
}

/// Weights of the locally integrable kernel `k`, with `zero_cell = ∫_{B_l} k`.
fn regular(
    grid: &Grid,
    k: impl Fn(usize, i64) -> Complex64,
    zero_cell: Complex64,
) -> Vec<Complex64> {
    let meas = grid.cell_measure();
    let (vals, _) = cell_values(grid, k);
    let mut w: Vec<Complex64> = vals.iter().map(|v| v * meas).collect();
    w[0] = zero_cell;
    w
}

/// Kernel values `k(e)` for `e ∈ (l, N]`, looked up by exponent.
fn radial_table(grid: &Grid, k: impl Fn(i64) -> Complex64) -> impl Fn(usize, i64) -> Complex64 {
    let l = grid.l;
    let table: Vec<Complex64> = (l + 1..=grid.big_n).map(k).collect();
    move |_, e| table[(e - l - 1) as usize]
}

impl CatalogEntry {
    pub fn new(p: u64, n: usize, kind: EntryKind) -> Result<Self> {
        crate::padic::is_prime(p)
            .then_some(())
            .ok_or_else(|| Error::Domain(format!("{p} is not prime")))?;
        let one_dim = |what: &str| -> Result<()> {
            if n != 1 {
                return Err(Error::Domain(format!(
                    "{what} is defined in one dimension, got n = {n}"
                )));
            }
            Ok(())
        };
        match &kind {
            EntryKind::PiAlpha(pi) | EntryKind::PiAlphaLog { pi, .. } => {
                one_dim("π_α")?;
                if pi.p() != p {
                    return Err(Error::PrimeMismatch(p, pi.p()));
                }
                if pi.pi1.is_trivial() {
                    if let Some(j) = pole_index(p, pi.alpha) {
                        return Err(Error::Pole { p, j });
                    }
                }
            }
            EntryKind::PLogOverAbs { m } => {
                one_dim("P(log^(m-1)|x|/|x|)")?;
                if *m == 0 {
                    return Err(Error::Domain("P(log^(m-1)|x|/|x|) needs m ≥ 1".into()));
                }
            }
            EntryKind::AbsAlphaMinusN(alpha) => {
                if let Some(j) = pole_index(p, *alpha) {
                    return Err(Error::Pole { p, j });
                }
            }
            EntryKind::RieszF(_) => one_dim("f_α")?,
            EntryKind::MultiRiesz(alphas) => {
                if alphas.len() != n {
                    return Err(Error::DimensionMismatch(n, alphas.len()));
                }
            }
            EntryKind::Tensor(factors) => {
                if factors.len() != n {
                    return Err(Error::DimensionMismatch(n, factors.len()));
                }
                for f in factors {
                    CatalogEntry::new(p, 1, f.clone())?;
                }
            }
            _ => {}
        }
        Ok(CatalogEntry { p, n, kind })
    }

    /// Parses `delta`, `const:c=2+1i`, `pi_alpha:alpha=0.5;pi1=1`,
    /// `pi_alpha_log:alpha=0.5;pi1=0;m=2`, `p_log_over_abs:m=1`,
    /// `abs_alpha_minus_n:alpha=1.7`, `p_inv_abs_n`, `log_abs`,
    /// `riesz_f:alpha=0.5`, `multi_riesz:alphas=1,0.5`, `riesz_kappa:alpha=2`.
    /// `pi1=r` selects the tame character of index `r` (0 is trivial).
    pub fn parse(spec: &str, p: u64, n: usize) -> Result<Self> {
        let spec = SpecString::parse(spec, "distribution")?;
        let character = || -> Result<MultCharacter> {
            let pi1 = character_from_index(p, spec.uint_or("pi1", 0)?)?;
            Ok(MultCharacter::new(spec.complex("alpha")?, pi1))
        };
        let m = || -> Result<u32> {
            u32::try_from(spec.uint_or("m", 1)?)
                .map_err(|_| Error::Parse("'m' is too large".into()))
        };
        let kind = match spec.name.as_str() {
            "delta" => EntryKind::Delta,
            "const" => EntryKind::Constant(spec.complex("c")?),
            "pi_alpha" => EntryKind::PiAlpha(character()?),
            "pi_alpha_log" => EntryKind::PiAlphaLog { pi: character()?, m: m()? },
            "p_log_over_abs" => EntryKind::PLogOverAbs { m: m()? },
            "abs_alpha_minus_n" => EntryKind::AbsAlphaMinusN(spec.complex("alpha")?),
            "p_inv_abs_n" => EntryKind::PInvAbsN,
            "log_abs" => EntryKind::LogAbs,
            "riesz_f" => EntryKind::RieszF(spec.complex("alpha")?),
            "multi_riesz" => EntryKind::MultiRiesz(spec.complex_list("alphas")?),
            "riesz_kappa" => EntryKind::RieszKappa(spec.complex("alpha")?),
            other => {
                return Err(Error::Parse(format!(
                    "unknown distribution '{other}' (expected delta, const, pi_alpha, pi_alpha_log, \
                     p_log_over_abs, abs_alpha_minus_n, p_inv_abs_n, log_abs, riesz_f, multi_riesz or riesz_kappa)"
                )))
            }
        };
        CatalogEntry::new(p, n, kind)
    }

    pub fn name(&self) -> String {
        match &self.kind {
            EntryKind::Delta => "delta".into(),
            EntryKind::Constant(c) => format!("const({c})"),
            EntryKind::PiAlpha(pi) => format!("pi_alpha(alpha={}, pi1={})", pi.alpha, pi.pi1),
            EntryKind::PiAlphaLog { pi, m } => {
                format!("pi_alpha_logm(alpha={}, pi1={}, m={m})", pi.alpha, pi.pi1)
            }
            EntryKind::PLogOverAbs { m } => format!("P_logm_over_abs(m={m})"),
            EntryKind::AbsAlphaMinusN(a) => format!("abs_alpha_minus_n(alpha={a})"),
            EntryKind::PInvAbsN => "P_inv_abs_n".into(),
            EntryKind::LogAbs => "log_abs".into(),
            EntryKind::RieszF(a) => format!("riesz_f(alpha={a})"),
            EntryKind::MultiRiesz(a) => format!("multi_riesz(alpha={a:?})"),
            EntryKind::RieszKappa(a) => format!("riesz_kappa(alpha={a})"),
            EntryKind::Tensor(f) => format!("tensor({} factors)", f.len()),
        }
    }

    /// Pairing weights on `grid`: `⟨f, φ⟩ = Σ_m W_m c_m` for every φ on that grid.
    pub fn weights(&self, grid: &Grid) -> Result<Vec<Complex64>> {
        if grid.p != self.p {
            return Err(Error::PrimeMismatch(self.p, grid.p));
        }
        if grid.n != self.n {
            return Err(Error::DimensionMismatch(self.n, grid.n));
        }
        let (p, n) = (self.p, self.n);
        let pf = p as f64;
        let nf = n as f64;
        let meas = grid.cell_measure();
        Ok(match &self.kind {
            EntryKind::Delta => {
                let mut w = vec![Complex64::zero(); grid.cells()];
                w[0] = c(1.0);
                w
            }
            EntryKind::Constant(v) => vec![v * meas; grid.cells()],
            EntryKind::AbsAlphaMinusN(alpha) => {
                let alpha = *alpha;
                let k = radial_table(grid, |e| ppow(p, (alpha - nf) * e as f64));
                let i0 = c(1.0 - pf.powf(-nf)) / (c(1.0) - ppow(p, -alpha));
                regularized(
                    grid,
                    k,
                    |g| ppow(p, alpha * g as f64) * (1.0 - pf.powf(-nf)),
                    i0,
                )
            }
            EntryKind::PInvAbsN => {
                let k = radial_table(grid, |e| c(pf.powf(-nf * e as f64)));
                regularized(grid, k, |_| c(1.0 - pf.powf(-nf)), Complex64::zero())
            }
            EntryKind::LogAbs => log_weights(grid, pf.ln()),
            EntryKind::PiAlpha(pi) => pi_alpha_weights(grid, pi, 0)?,
            EntryKind::PiAlphaLog { pi, m } => pi_alpha_weights(grid, pi, *m)?,
            EntryKind::PLogOverAbs { m } => {
                let k = m - 1;
                let table =
                    radial_table(
                        grid,
                        |e| c((e as f64).powi(k as i32) * pf.powf(-(e as f64))),
                    );
                regularized(
                    grid,
                    table,
                    |g| c((g as f64).powi(k as i32) * (1.0 - 1.0 / pf)),
                    Complex64::zero(),
                )
            }
            EntryKind::RieszKappa(alpha) | EntryKind::RieszF(alpha) => kappa_weights(grid, *alpha),
            EntryKind::MultiRiesz(alphas) => {
                let factors: Vec<EntryKind> =
                    alphas.iter().map(|a| EntryKind::RieszF(*a)).collect();
                tensor_weights(p, grid, &factors)?
            }
            EntryKind::Tensor(factors) => tensor_weights(p, grid, factors)?,
        })
    }

    /// The entry as a pairing functional, annotated with its homogeneity.
    pub fn distribution(&self) -> Distribution {
        let entry = self.clone();
        let d = Distribution::new(self.p, self.n, self.name(), move |phi| {
            let w = entry.weights(phi.grid())?;
            Ok(w.iter().zip(phi.coeffs()).map(|(a, b)| a * b).sum())
        });
        match self.homogeneity() {
            Some(h) => d.with_homogeneity(h),
            None => d,
        }
    }

    fn sibling(&self, kind: EntryKind) -> Distribution {
        CatalogEntry {
            p: self.p,
            n: self.n,
            kind,
        }
        .distribution()
    }

    fn homogeneity(&self) -> Option<Homogeneity> {
        let (p, n) = (self.p, self.n);
        let pf = p as f64;
        let nf = n as f64;
        let power = |a: Complex64| MultCharacter::power(p, a);
        let plain = |degree: MultCharacter| Homogeneity {
            degree,
            order: 0,
            companions: vec![],
        };
        Some(match &self.kind {
            EntryKind::Delta => plain(power(c(1.0 - nf))),
            EntryKind::Constant(_) => plain(power(c(1.0))),
            EntryKind::AbsAlphaMinusN(a) => plain(power(a - nf + 1.0)),
            EntryKind::PInvAbsN => Homogeneity {
                degree: power(c(1.0 - nf)),
                order: 1,
                companions: vec![self.sibling(EntryKind::Delta).scale(c(1.0 - pf.powf(-nf)))],
            },
            EntryKind::LogAbs => Homogeneity {
                degree: power(c(1.0)),
                order: 1,
                companions: vec![self.sibling(EntryKind::Constant(c(pf.ln())))],
            },
            EntryKind::PiAlpha(pi) => plain(*pi),
            EntryKind::PiAlphaLog { pi, m } => Homogeneity {
                degree: *pi,
                order: *m as usize,
                companions: (1..=*m)
                    .map(|j| {
                        let lower = if j == *m {
                            EntryKind::PiAlpha(*pi)
                        } else {
                            EntryKind::PiAlphaLog { pi: *pi, m: m - j }
                        };
                        self.sibling(lower).scale(c(binomial(*m, j)))
                    })
                    .collect(),
            },
            EntryKind::PLogOverAbs { m } => {
                let k = m - 1;
                let faul = faulhaber_coefficients(k);
                let delta = self.sibling(EntryKind::Delta);
                Homogeneity {
                    degree: power(c(0.0)),
                    order: *m as usize,
                    companions: (1..=*m)
                        .map(|j| {
                            let d = delta.scale(c((1.0 - 1.0 / pf) * faul[j as usize - 1]));
                            if j <= k {
                                let g = self.sibling(EntryKind::PLogOverAbs { m: m - j });
                                g.scale(c(binomial(k, j))).add(&d).expect("same p and n")
                            } else {
                                d
                            }
                        })
                        .collect(),
                }
            }
            EntryKind::RieszKappa(a) | EntryKind::RieszF(a) => {
                if pole_index(p, a - nf).is_some() {
                    Homogeneity {
                        degree: power(c(1.0)),
                        order: 1,
                        companions: vec![
                            self.sibling(EntryKind::Constant(c(-(1.0 - pf.powf(-nf)))))
                        ],
                    }
                } else {
                    plain(power(a - nf + 1.0))
                }
            }
            EntryKind::MultiRiesz(alphas) => {
                let total: Complex64 = alphas.iter().sum();
                let ones: Vec<usize> = (0..n)
                    .filter(|&j| pole_index(p, alphas[j] - 1.0).is_some())
                    .collect();
                let constant = -(1.0 - 1.0 / pf);
                let order = ones.len();
                let mut companions = Vec::with_capacity(order);
                for j in 1..=order {
                    let mut acc: Option<Distribution> = None;
                    for mask in 0u32..(1 << order) {
                        if mask.count_ones() as usize != j {
                            continue;
                        }
                        let factors: Vec<EntryKind> = (0..n)
                            .map(|i| match ones.iter().position(|&o| o == i) {
                                Some(bit) if mask & (1 << bit) != 0 => EntryKind::Constant(c(1.0)),
                                _ => EntryKind::RieszF(alphas[i]),
                            })
                            .collect();
                        let term = self
                            .sibling(EntryKind::Tensor(factors))
                            .scale(c(constant.powi(j as i32)));
                        acc = Some(match acc {
                            None => term,
                            Some(a) => a.add(&term).expect("same p and n"),
                        });
                    }
                    companions.push(acc.expect("at least one subset of each size"));
                }
                Homogeneity {
                    degree: power(total - nf + 1.0),
                    order,
                    companions,
                }
            }
            EntryKind::Tensor(_) => return None,
        })
    }
}

/// `∫ ln|x|ₚ φ`; the zero cell integrates to `p^{nl} ln p (l − r/(1−r))`, `r = p^{−n}`.
fn log_weights(grid: &Grid, scale: f64) -> Vec<Complex64> {
    let pf = grid.p as f64;
    let r = pf.powi(-(grid.n as i32));
    let meas = grid.cell_measure();
    let zero = meas * (grid.l as f64 - r / (1.0 - r));
    regular(grid, |_, e| c(e as f64 * scale), c(zero * scale))
}

fn pi_alpha_weights(grid: &Grid, pi: &MultCharacter, m: u32) -> Result<Vec<Complex64>> {
    let p = grid.p;
    let pf = p as f64;
    let alpha = pi.alpha;
    let logm = |e: i64| (e as f64).powi(m as i32);
    if pi.pi1.is_trivial() {
        let k = radial_table(grid, |e| ppow(p, (alpha - 1.0) * e as f64) * logm(e));
        let i0 = i0_log(p, alpha, m)?;
        Ok(regularized(
            grid,
            k,
            |g| ppow(p, alpha * g as f64) * (1.0 - 1.0 / pf) * logm(g),
            i0,
        ))
    } else {
        // Unit-sphere integrals of a nontrivial π₁ vanish, so neither the
        // covered spheres nor I₀ contribute.
        let chars = pi.pi1.table();
        let residues = grid.axis_unit_residues();
        let radial: Vec<Complex64> = (grid.l + 1..=grid.big_n)
            .map(|e| ppow(p, (alpha - 1.0) * e as f64) * logm(e))
            .collect();
        let l = grid.l;
        let k = move |flat: usize, e: i64| {
            radial[(e - l - 1) as usize] * chars[residues[flat] as usize]
        };
        Ok(regularized(
            grid,
            k,
            |_| Complex64::zero(),
            Complex64::zero(),
        ))
    }
}

/// `κ_α = (1−p^{−α})/(1−p^{α−n}) · R_α + (1−p^{−n})/(1−p^{α−n}) · δ`, where
/// `R_α` is the regularized `|x|ₚ^{α−n}` without its `φ(0)` constant; at
/// `α = n + μ_j` the limit `−(1−p^{−n}) log_p|x|ₚ` is used.
fn kappa_weights(grid: &Grid, alpha: Complex64) -> Vec<Complex64> {
    let p = grid.p;
    let pf = p as f64;
    let nf = grid.n as f64;
    let one = c(1.0);
    if pole_index(p, alpha - nf).is_some() {
        return log_weights(grid, -(1.0 - pf.powf(-nf)));
    }
    let denom = one - ppow(p, alpha - nf);
    let a = (one - ppow(p, -alpha)) / denom;
    let b = c(1.0 - pf.powf(-nf)) / denom;
    let k = radial_table(grid, |e| ppow(p, (alpha - nf) * e as f64));
    let mut w = regularized(
        grid,
        k,
        |g| ppow(p, alpha * g as f64) * (1.0 - pf.powf(-nf)),
        Complex64::zero(),
    );
    for v in w.iter_mut() {
        *v *= a;
    }
    w[0] += b;
    w
}

fn tensor_weights(p: u64, grid: &Grid, factors: &[EntryKind]) -> Result<Vec<Complex64>> {
    let axis = Grid::new(p, 1, grid.l, grid.big_n)?;
    let per_axis: Vec<Vec<Complex64>> = factors
        .iter()
        .map(|k| CatalogEntry::new(p, 1, k.clone())?.weights(&axis))
        .collect::<Result<_>>()?;
    let side = grid.side();
    let n = grid.n;
    Ok((0..grid.cells())
        .map(|flat| {
            let mut rest = flat;
            let mut acc = c(1.0);
            for j in (0..n).rev() {
                acc *= per_axis[j][rest % side];
                rest /= side;
            }
            acc
        })
        .collect())
}

/// `π₁` from its index: 0 is trivial, `r > 0` the tame character of index `r`.
pub fn character_from_index(p: u64, r: u64) -> Result<NormedCharacter> {
    if r == 0 {
        Ok(NormedCharacter::trivial(p))
    } else {
        NormedCharacter::tame(p, r)
    }
}
