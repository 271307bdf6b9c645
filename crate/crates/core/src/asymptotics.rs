//! Automodel functions, quasi-asymptotic limits along `|t|ₚ = p^k`, and the
//! per-scale change-of-variables identities behind the Tauberian theorems.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::SpecString;
use crate::distributions::catalog::character_from_index;
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::lizorkin::{require_phi, LizorkinKind};
use crate::operators::{apply, apply_dist, convolution_oracle, vladimirov_oracle, Symbol};
use crate::padic::{norm_pow, MultCharacter, NormedCharacter, PRational, PVector};
use crate::schwartz::TestFunction;
use crate::special::{gamma_p, gamma_p_char};

type RhoFn = dyn Fn(&PRational) -> Complex64 + Send + Sync;

/// `ρ(t) = |t|ₚ^{α−1} π₁(t) log_pᵐ|t|ₚ`, or a user function with a declared degree.
#[derive(Clone)]
pub enum Automodel {
    Power {
        alpha: Complex64,
        pi1: NormedCharacter,
        m: u32,
    },
    Custom {
        name: String,
        degree: MultCharacter,
        f: Arc<RhoFn>,
    },
}

impl fmt::Debug for Automodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automodel({self})")
    }
}

impl fmt::Display for Automodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Automodel::Power { alpha, pi1, m } => write!(f, "|t|^({alpha}-1)·{pi1}(t)·log^{m}|t|"),
            Automodel::Custom { name, .. } => write!(f, "{name}"),
        }
    }
}

impl Automodel {
    pub fn power(alpha: Complex64, pi1: NormedCharacter, m: u32) -> Self {
        Automodel::Power { alpha, pi1, m }
    }

    pub fn custom(
        name: impl Into<String>,
        degree: MultCharacter,
        f: impl Fn(&PRational) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Automodel::Custom {
            name: name.into(),
            degree,
            f: Arc::new(f),
        }
    }

    /// Parses `power:alpha=0.5;pi1=0;m=0`; every field but `alpha` is optional.
    pub fn parse(spec: &str, p: u64) -> Result<Self> {
        let spec = SpecString::parse(spec, "automodel")?;
        if spec.name != "power" {
            return Err(Error::Parse(format!(
                "unknown automodel '{}' (expected power)",
                spec.name
            )));
        }
        let pi1 = character_from_index(p, spec.uint_or("pi1", 0)?)?;
        let m = u32::try_from(spec.uint_or("m", 0)?)
            .map_err(|_| Error::Parse("'m' is too large".into()))?;
        Ok(Automodel::power(spec.complex("alpha")?, pi1, m))
    }

    pub fn p(&self) -> u64 {
        self.degree().p()
    }

    /// The character `π_α` with `ρ(st)/ρ(t) → π_α(s)`.
    pub fn degree(&self) -> MultCharacter {
        match self {
            Automodel::Power { alpha, pi1, .. } => MultCharacter::new(*alpha, *pi1),
            Automodel::Custom { degree, .. } => *degree,
        }
    }

    pub fn eval(&self, t: &PRational) -> Result<Complex64> {
        match self {
            Automodel::Power { m, .. } => {
                let s = t
                    .norm()
                    .exponent()
                    .ok_or_else(|| Error::Domain("automodel evaluated at t = 0".into()))?;
                Ok(self.degree().eval(t)? * (s as f64).powi(*m as i32))
            }
            Automodel::Custom { f, .. } => Ok(f(t)),
        }
    }

    fn eval_nonzero(&self, t: &PRational) -> Result<Complex64> {
        let v = self.eval(t)?;
        if v.norm() == 0.0 || !v.is_finite() {
            return Err(Error::Domain(format!(
                "degenerate automodel: rho({t}) = {v}"
            )));
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Infinity,
    Zero,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Infinity => "infinity",
            Direction::Zero => "zero",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "infinity" | "inf" => Ok(Direction::Infinity),
            "zero" | "0" => Ok(Direction::Zero),
            other => Err(Error::Parse(format!(
                "unknown direction '{other}' (expected infinity or zero)"
            ))),
        }
    }
}

/// Stabilization window for [`quasi_limit`].
pub const WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub k: i64,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub direction: Direction,
    pub rows: Vec<LimitRow>,
    /// `|s_k − s_{k−1}|` for `k ≥ 2`.
    pub increments: Vec<f64>,
    pub stabilized: bool,
    /// The last value `s_K`.
    pub limit: Complex64,
}

fn p_power(p: u64, k: i64) -> Result<PRational> {
    PRational::p_power(p, k)
}

/// `s_k = ⟨f(t_k x), φ⟩ / ρ(t_k)` with `|t_k|ₚ = p^k` (infinity), or
/// `s_k = ⟨f(x/t_k), φ⟩ / ρ(t_k)` (zero), for `k = 1..=K`.
pub fn quasi_limit(
    f: &Distribution,
    rho: &Automodel,
    phi: &TestFunction,
    direction: Direction,
    k_max: i64,
    tol: f64,
) -> Result<LimitReport> {
    if k_max < WINDOW as i64 {
        return Err(Error::Domain(format!(
            "quasi_limit needs K ≥ {WINDOW}, got {k_max}"
        )));
    }
    let p = f.p();
    let values: Vec<Result<Complex64>> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let t = p_power(p, -k)?;
            let arg = match direction {
                Direction::Infinity => t.clone(),
                Direction::Zero => p_power(p, k)?,
            };
            Ok(f.dilate(&arg)?.pair(phi)? / rho.eval_nonzero(&t)?)
        })
        .collect();
    let values: Vec<Complex64> = values.into_iter().collect::<Result<_>>()?;
    let increments: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let limit = *values.last().expect("K ≥ 3");
    let stabilized = increments[increments.len() + 1 - WINDOW..]
        .iter()
        .all(|d| *d <= tol * limit.norm().max(1.0));
    let rows = values
        .into_iter()
        .zip(1..)
        .map(|(value, k)| LimitRow { k, value })
        .collect();
    Ok(LimitReport {
        direction,
        rows,
        increments,
        stabilized,
        limit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub k: i64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs − rhs| / max(1, |lhs|, |rhs|)`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
    pub max_residual: f64,
}

fn identity_report(
    ks: &[i64],
    side: impl Fn(i64) -> Result<(Complex64, Complex64)> + Send + Sync,
) -> Result<IdentityReport> {
    let rows: Vec<Result<IdentityRow>> = ks
        .par_iter()
        .map(|&k| {
            let (lhs, rhs) = side(k)?;
            let residual = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0);
            Ok(IdentityRow {
                k,
                lhs,
                rhs,
                residual,
            })
        })
        .collect();
    let rows: Vec<IdentityRow> = rows.into_iter().collect::<Result<_>>()?;
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(IdentityReport { rows, max_residual })
}

/// `⟨F[f](ξ/t), φ⟩ / (|t|ⁿρ(t)) = ⟨f(tx), F[φ]⟩ / ρ(t)` at `t = p^{−k}`.
pub fn verify_th5(
    f: &Distribution,
    rho: &Automodel,
    phi: &TestFunction,
    ks: &[i64],
) -> Result<IdentityReport> {
    let (p, n) = (f.p(), f.n());
    let ff = f.fourier();
    let phi_hat = phi.fourier();
    identity_report(ks, |k| {
        let t = p_power(p, -k)?;
        let r = rho.eval_nonzero(&t)?;
        let lhs = ff.dilate(&p_power(p, k)?)?.pair(phi)?
            / (norm_pow(p, k, Complex64::new(n as f64, 0.0)) * r);
        let rhs = f.dilate(&t)?.pair(&phi_hat)? / r;
        Ok((lhs, rhs))
    })
}

/// `⟨(D^βf)(tx), φ⟩ / (|t|^{−β}ρ(t)) = ⟨f(tx), D^βφ⟩ / ρ(t)` at `t = p^{−k}`.
///
/// Second kind: one Taibleson order `β`. First kind: Vladimirov orders
/// `β_j`, normalized by `|t|^{Σ(−β_j)}`. The left side applies `D^β` to
/// the dilated test function through the kernel sums (including the log
/// kernels at `β = −n` or `β_j = −1`), the right side through the Fourier
/// multiplier.
pub fn verify_th7_th8(
    f: &Distribution,
    beta: &[Complex64],
    rho: &Automodel,
    phi: &TestFunction,
    kind: LizorkinKind,
    ks: &[i64],
) -> Result<IdentityReport> {
    require_phi(phi, kind)?;
    let (p, n) = (f.p(), f.n());
    let (sym, total) = match kind {
        LizorkinKind::SecondKind => {
            if beta.len() != 1 {
                return Err(Error::Domain(format!(
                    "the Taibleson check takes one order, got {}",
                    beta.len()
                )));
            }
            (Symbol::taibleson(p, n, beta[0])?, beta[0])
        }
        LizorkinKind::FirstKind => {
            if beta.len() != n {
                return Err(Error::DimensionMismatch(n, beta.len()));
            }
            (Symbol::vladimirov(p, beta.to_vec())?, beta.iter().sum())
        }
    };
    let d_phi = apply(&sym, phi, kind)?;
    identity_report(ks, |k| {
        let t = p_power(p, -k)?;
        let r = rho.eval_nonzero(&t)?;
        let shrunk = phi.dilate_arg(&t)?;
        let kernel_side = match kind {
            LizorkinKind::SecondKind => convolution_oracle(beta[0], &shrunk)?,
            LizorkinKind::FirstKind => vladimirov_oracle(beta, &shrunk)?,
        };
        let dilated_pair =
            norm_pow(p, k, Complex64::new(-(n as f64), 0.0)) * f.pair(&kernel_side)?;
        let lhs = dilated_pair / (norm_pow(p, k, -total) * r);
        let rhs = f.dilate(&t)?.pair(&d_phi)? / r;
        Ok((lhs, rhs))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimitiveRow {
    pub k: i64,
    /// `(D^{−N}f)(y) − (D^{−N}f)(py)` at `y = p^{−k}`.
    pub value: Complex64,
    /// `value / (|y|ᴺρ(y) − |py|ᴺρ(py))`.
    pub ratio: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimitiveReport {
    pub rows: Vec<PrimitiveRow>,
    /// `C·Γₚ(π_α)/Γₚ(π_{α+N})`, or `C/Γₚ(N)` for the degree of `δ`.
    pub predicted: Option<Complex64>,
    /// `|ratio_K − predicted|`.
    pub final_error: Option<f64>,
}

/// `g(y) − g(py)` for a Lizorkin functional `g` that is locally constant near
/// `y` and `py`, read off with the zero-mean probe
/// `p^{−r}1_{y+B_r} − p^{1−r}1_{py+B_{r−1}}`. A Lizorkin functional has point
/// values only up to an additive constant, which the difference removes.
fn point_difference(g: &Distribution, y: &PRational, r: i64) -> Result<Complex64> {
    let p = g.p();
    let probe = |center: PRational, radius: i64| -> Result<TestFunction> {
        let ball = TestFunction::indicator_coset(&PVector::scalar(center), radius)?;
        Ok(ball.scale(norm_pow(p, radius, Complex64::new(-1.0, 0.0))))
    };
    let near = probe(y.clone(), r)?;
    let inner = probe(y.mul_p_power(1), r - 1)?;
    g.pair(&near.sub(&inner)?)
}

/// Ratio of `(D^{−N}f)` increments to `|y|ᴺρ(y)` increments between `|y|ₚ = p^k`
/// and `p^{k−1}`, `n = 1`, for `f` with quasi-asymptotics `C·π_α` at infinity.
pub fn verify_th9(
    f: &Distribution,
    rho: &Automodel,
    c: Complex64,
    big_n: u32,
    ks: &[i64],
) -> Result<PrimitiveReport> {
    if f.n() != 1 {
        return Err(Error::Hypothesis(format!(
            "the primitive D^(-N) f is checked in one dimension, got n = {}",
            f.n()
        )));
    }
    let degree = rho.degree();
    let alpha = degree.alpha;
    if (big_n as f64) <= 1.0 - alpha.re {
        return Err(Error::Hypothesis(format!(
            "N = {big_n} violates N > -alpha + 1 for alpha = {alpha}"
        )));
    }
    let p = f.p();
    let order = Complex64::new(big_n as f64, 0.0);
    let primitive = apply_dist(
        &Symbol::taibleson(p, 1, -order)?,
        f,
        LizorkinKind::SecondKind,
    )?;
    let rows: Vec<Result<PrimitiveRow>> = ks
        .par_iter()
        .map(|&k| {
            let y = p_power(p, -k)?;
            let value = point_difference(&primitive, &y, k - 1)?;
            let finer = point_difference(&primitive, &y, k - 2)?;
            if (value - finer).norm() > 1e-9 * value.norm().max(1.0) {
                return Err(Error::Hypothesis(format!(
                    "D^(-N) f is not locally constant around y = {y}: {value} vs {finer}"
                )));
            }
            let py = y.mul_p_power(1);
            let scale = norm_pow(p, k, order) * rho.eval_nonzero(&y)?
                - norm_pow(p, k - 1, order) * rho.eval_nonzero(&py)?;
            Ok(PrimitiveRow {
                k,
                value,
                ratio: value / scale,
            })
        })
        .collect();
    let rows: Vec<PrimitiveRow> = rows.into_iter().collect::<Result<_>>()?;
    let is_delta_degree = degree.pi1.is_trivial() && alpha.norm() < 1e-15;
    let predicted = if is_delta_degree {
        gamma_p(p, order).value().map(|g| c / g)
    } else {
        let shifted = MultCharacter::new(alpha + order, degree.pi1);
        match (
            gamma_p_char(&degree).value(),
            gamma_p_char(&shifted).value(),
        ) {
            (Some(a), Some(b)) => Some(c * a / b),
            _ => None,
        }
    };
    let final_error = predicted
        .zip(rows.last())
        .map(|(a, r)| (r.ratio - a).norm());
    Ok(PrimitiveReport {
        rows,
        predicted,
        final_error,
    })
}

/// Spot check of `𝒜(tξ) = π_β(t)𝒜(ξ)` on the spectral cosets of `φ`.
fn check_symbol_homogeneity(
    sym: &Symbol,
    degree: &MultCharacter,
    phi: &TestFunction,
) -> Result<()> {
    let p = sym.p();
    let spectral = phi.grid().dual();
    let mut ts = vec![p_power(p, 1)?, p_power(p, -1)?, PRational::from_int(p, -1)?];
    if p > 2 {
        ts.push(PRational::from_int(p, 2)?);
    }
    let step = (spectral.cells() / 64).max(1);
    for flat in (1..spectral.cells()).step_by(step) {
        let xi = spectral.representative(flat);
        let base = sym.eval_point(&xi)?;
        for t in &ts {
            let scaled = sym.eval_point(&xi.scale(t))?;
            let expected = degree.eval(t)? * base;
            if (scaled - expected).norm() > 1e-10 * expected.norm().max(1.0) {
                return Err(Error::Symbol(format!(
                    "{sym} is not homogeneous of the declared degree: A({t}·{xi}) = {scaled}, expected {expected}"
                )));
            }
        }
    }
    Ok(())
}

/// `⟨(Af)(tx), φ⟩ / (π_β(t)⁻¹ρ(t)) = ⟨f(tx), Aᵀφ⟩ / ρ(t)` at `t = p^{−k}`
/// for a symbol homogeneous of degree `π_β`.
pub fn verify_th10(
    f: &Distribution,
    sym: &Symbol,
    degree: &MultCharacter,
    rho: &Automodel,
    phi: &TestFunction,
    ks: &[i64],
) -> Result<IdentityReport> {
    require_phi(phi, LizorkinKind::SecondKind)?;
    check_symbol_homogeneity(sym, degree, phi)?;
    let p = f.p();
    let af = apply_dist(sym, f, LizorkinKind::SecondKind)?;
    let at_phi = apply(&sym.transpose(), phi, LizorkinKind::SecondKind)?;
    identity_report(ks, |k| {
        let t = p_power(p, -k)?;
        let r = rho.eval_nonzero(&t)?;
        let lhs = af.dilate(&t)?.pair(phi)? * degree.eval(&t)? / r;
        let rhs = f.dilate(&t)?.pair(&at_phi)? / r;
        Ok((lhs, rhs))
    })
}
