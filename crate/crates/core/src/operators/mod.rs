//! Pseudo-differential operators `A = F⁻¹ ∘ 𝒜(ξ) ∘ F` on the Lizorkin spaces:
//! the Taibleson and Vladimirov fractional operators, the Laplacians,
//! polynomial symbols and their compositions, inverses and solvers.

pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

pub use crate::args::parse_complex;
use crate::args::SpecString;
use crate::distributions::{CatalogEntry, Distribution, EntryKind};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lizorkin::{require_phi, LizorkinKind};
use crate::padic::{ppow, PRational, PVector};
use crate::schwartz::TestFunction;

/// Symbol values below this modulus count as zeros.
pub const ZERO_TOLERANCE: f64 = 1e-12;

type SymbolFn = dyn Fn(&PVector) -> Complex64 + Send + Sync;

#[derive(Clone)]
pub enum SymbolKind {
    /// `|ξ|ₚ^α`.
    Taibleson(Complex64),
    /// `∏ |ξ_j|ₚ^{α_j}`.
    Vladimirov(Vec<Complex64>),
    /// `−Σ |ξ_k|ₚ²`.
    Laplacian1,
    /// `−|ξ|ₚ²`.
    Laplacian2,
    /// `P(|ξ|ₚ^α)` with coefficients in increasing degree.
    Poly {
        coeffs: Vec<Complex64>,
        alpha: Complex64,
    },
    /// A user function evaluated at spectral coset representatives.
    Custom {
        name: String,
        f: Arc<SymbolFn>,
    },
    Product(Box<Symbol>, Box<Symbol>),
    Reciprocal(Box<Symbol>),
    /// `𝒜(−ξ)`.
    Transposed(Box<Symbol>),
}

#[derive(Clone)]
pub struct Symbol {
    p: u64,
    n: usize,
    kind: SymbolKind,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({}, p={}, n={})", self, self.p, self.n)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::Taibleson(a) => write!(f, "taibleson(alpha={a})"),
            SymbolKind::Vladimirov(a) => {
                let list: Vec<String> = a.iter().map(|z| z.to_string()).collect();
                write!(f, "vladimirov(alphas={})", list.join(","))
            }
            SymbolKind::Laplacian1 => write!(f, "laplacian1"),
            SymbolKind::Laplacian2 => write!(f, "laplacian2"),
            SymbolKind::Poly { coeffs, alpha } => {
                let list: Vec<String> = coeffs.iter().map(|z| z.to_string()).collect();
                write!(f, "poly(coeffs={}, alpha={alpha})", list.join(","))
            }
            SymbolKind::Custom { name, .. } => write!(f, "custom({name})"),
            SymbolKind::Product(a, b) => write!(f, "({a})·({b})"),
            SymbolKind::Reciprocal(a) => write!(f, "1/({a})"),
            SymbolKind::Transposed(a) => write!(f, "({a})^T"),
        }
    }
}

impl Symbol {
    fn new(p: u64, n: usize, kind: SymbolKind) -> Result<Self> {
        Grid::new(p, n, 0, 0)?;
        Ok(Symbol { p, n, kind })
    }

    pub fn taibleson(p: u64, n: usize, alpha: Complex64) -> Result<Self> {
        Self::new(p, n, SymbolKind::Taibleson(alpha))
    }

    pub fn vladimirov(p: u64, alphas: Vec<Complex64>) -> Result<Self> {
        let n = alphas.len();
        Self::new(p, n, SymbolKind::Vladimirov(alphas))
    }

    pub fn laplacian1(p: u64, n: usize) -> Result<Self> {
        Self::new(p, n, SymbolKind::Laplacian1)
    }

    pub fn laplacian2(p: u64, n: usize) -> Result<Self> {
        Self::new(p, n, SymbolKind::Laplacian2)
    }

    pub fn poly(p: u64, n: usize, coeffs: Vec<Complex64>, alpha: Complex64) -> Result<Self> {
        if poly::trim(&coeffs).is_empty() {
            return Err(Error::Symbol("the zero polynomial is not a symbol".into()));
        }
        Self::new(p, n, SymbolKind::Poly { coeffs, alpha })
    }

    pub fn custom(
        p: u64,
        n: usize,
        name: impl Into<String>,
        f: impl Fn(&PVector) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(
            p,
            n,
            SymbolKind::Custom {
                name: name.into(),
                f: Arc::new(f),
            },
        )
    }

    /// Parses `taibleson:alpha=0.5`, `vladimirov:alphas=1,-1`,
    /// `poly:coeffs=1,0,2;alpha=1`, `laplacian1`, `laplacian2`.
    pub fn parse(spec: &str, p: u64, n: usize) -> Result<Self> {
        let spec = SpecString::parse(spec, "symbol")?;
        match spec.name.as_str() {
            "taibleson" => Self::taibleson(p, n, spec.complex("alpha")?),
            "vladimirov" => {
                let alphas = spec.complex_list("alphas")?;
                if alphas.len() != n {
                    return Err(Error::DimensionMismatch(n, alphas.len()));
                }
                Self::vladimirov(p, alphas)
            }
            "laplacian1" => Self::laplacian1(p, n),
            "laplacian2" => Self::laplacian2(p, n),
            "poly" => {
                let alpha = spec.complex_or("alpha", Complex64::new(1.0, 0.0))?;
                Self::poly(p, n, spec.complex_list("coeffs")?, alpha)
            }
            other => Err(Error::Parse(format!(
                "unknown symbol '{other}' (expected taibleson, vladimirov, laplacian1, laplacian2 or poly)"
            ))),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    /// Whether the symbol is singular on the coordinate hyperplanes, so that
    /// it only acts on the first-kind spaces.
    pub fn needs_first_kind(&self) -> bool {
        match &self.kind {
            SymbolKind::Vladimirov(_) | SymbolKind::Laplacian1 => true,
            SymbolKind::Product(a, b) => a.needs_first_kind() || b.needs_first_kind(),
            SymbolKind::Reciprocal(a) | SymbolKind::Transposed(a) => a.needs_first_kind(),
            _ => false,
        }
    }

    fn check_compatible(&self, other: &Symbol) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Pointwise product; fractional powers of the same family add exponents.
    pub fn compose(&self, other: &Symbol) -> Result<Symbol> {
        self.check_compatible(other)?;
        let kind = match (&self.kind, &other.kind) {
            (SymbolKind::Taibleson(a), SymbolKind::Taibleson(b)) => SymbolKind::Taibleson(a + b),
            (SymbolKind::Vladimirov(a), SymbolKind::Vladimirov(b)) => {
                SymbolKind::Vladimirov(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => SymbolKind::Product(Box::new(self.clone()), Box::new(other.clone())),
        };
        Ok(Symbol {
            p: self.p,
            n: self.n,
            kind,
        })
    }

    /// Pointwise reciprocal; zeros surface as errors when the symbol is evaluated.
    pub fn inverse(&self) -> Symbol {
        let kind = match &self.kind {
            SymbolKind::Taibleson(a) => SymbolKind::Taibleson(-a),
            SymbolKind::Vladimirov(a) => SymbolKind::Vladimirov(a.iter().map(|x| -x).collect()),
            SymbolKind::Reciprocal(a) => return (**a).clone(),
            _ => SymbolKind::Reciprocal(Box::new(self.clone())),
        };
        Symbol {
            p: self.p,
            n: self.n,
            kind,
        }
    }

    /// `𝒜ᵀ(ξ) = 𝒜(−ξ)`; the builtin symbols are even.
    pub fn transpose(&self) -> Symbol {
        let kind = match &self.kind {
            SymbolKind::Custom { .. } => SymbolKind::Transposed(Box::new(self.clone())),
            SymbolKind::Transposed(a) => return (**a).clone(),
            SymbolKind::Product(a, b) => {
                SymbolKind::Product(Box::new(a.transpose()), Box::new(b.transpose()))
            }
            SymbolKind::Reciprocal(a) => SymbolKind::Reciprocal(Box::new(a.transpose())),
            _ => return self.clone(),
        };
        Symbol {
            p: self.p,
            n: self.n,
            kind,
        }
    }

    /// Value at a cell given by its per-axis digits on the spectral grid;
    /// `axis` holds the per-axis norm exponents (`None` for the zero coset).
    fn eval_cell(&self, grid: &Grid, axis: &[Option<i64>], digits: &[u64]) -> Result<Complex64> {
        let p = self.p;
        let exps = || digits.iter().map(|&d| axis[d as usize]);
        let radial = || exps().flatten().max();
        let singular = || Error::Symbol(format!("{self} evaluated on the zero coset"));
        Ok(match &self.kind {
            SymbolKind::Taibleson(a) => ppow(p, a * radial().ok_or_else(singular)? as f64),
            SymbolKind::Vladimirov(alphas) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for (e, a) in exps().zip(alphas) {
                    acc *= ppow(p, a * e.ok_or_else(singular)? as f64);
                }
                acc
            }
            SymbolKind::Laplacian1 => {
                let mut acc = 0.0;
                for e in exps() {
                    acc -= (p as f64).powi(2 * e.ok_or_else(singular)? as i32);
                }
                Complex64::new(acc, 0.0)
            }
            SymbolKind::Laplacian2 => Complex64::new(
                -(p as f64).powi(2 * radial().ok_or_else(singular)? as i32),
                0.0,
            ),
            SymbolKind::Poly { coeffs, alpha } => {
                let z = ppow(p, alpha * radial().ok_or_else(singular)? as f64);
                poly::eval(coeffs, z)
            }
            SymbolKind::Custom { f, .. } => f(&grid.representative(grid.flat_index(digits))),
            SymbolKind::Product(a, b) => {
                a.eval_cell(grid, axis, digits)? * b.eval_cell(grid, axis, digits)?
            }
            SymbolKind::Reciprocal(a) => {
                let v = a.eval_cell(grid, axis, digits)?;
                if v.norm() < ZERO_TOLERANCE || !v.is_finite() {
                    let xi = grid.representative(grid.flat_index(digits));
                    return Err(Error::NonInvertible(xi.to_string()));
                }
                1.0 / v
            }
            SymbolKind::Transposed(a) => {
                let side = grid.side() as u64;
                let neg: Vec<u64> = digits.iter().map(|&d| (side - d) % side).collect();
                a.eval_cell(grid, axis, &neg)?
            }
        })
    }

    /// Symbol values on every cell of a spectral grid, with zeros on the cells
    /// the Lizorkin space of `kind` excludes (the zero cell, or every cell
    /// touching a coordinate hyperplane).
    pub fn values(&self, grid: &Grid, kind: LizorkinKind) -> Result<Vec<Complex64>> {
        let axis = grid.axis_norm_table();
        let results: Vec<Result<Complex64>> = (0..grid.cells())
            .into_par_iter()
            .map(|flat| {
                let digits = grid.multi_index(flat);
                let excluded = match kind {
                    LizorkinKind::SecondKind => digits.iter().all(|&d| d == 0),
                    LizorkinKind::FirstKind => digits.iter().any(|&d| d == 0),
                };
                if excluded {
                    Ok(Complex64::zero())
                } else {
                    self.eval_cell(grid, &axis, &digits)
                }
            })
            .collect();
        results.into_iter().collect()
    }

    /// Checks that a custom symbol is constant on the cosets of `grid` by
    /// sampling `x + j·p^{−l}·(1, …, 1)` for `j = 0..p`.
    pub fn verify_constancy(&self, grid: &Grid, kind: LizorkinKind) -> Result<f64> {
        let base = self.values(grid, kind)?;
        let mut worst: f64 = 0.0;
        let step = PRational::p_power(self.p, -grid.l)?;
        for (flat, v) in base.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let x = grid.representative(flat);
            for j in 1..self.p {
                let shift = &step * &PRational::from_int(self.p, j as i64)?;
                let y = PVector::new(x.coords().iter().map(|c| c + &shift).collect())?;
                let w = self.eval_point(&y)?;
                worst = worst.max((w - v).norm() / v.norm().max(1.0));
            }
        }
        if worst > 1e-12 {
            return Err(Error::Symbol(format!(
                "{self} is not constant on the cosets of (l={}, N={}): deviation {worst:e}",
                grid.l, grid.big_n
            )));
        }
        Ok(worst)
    }

    /// Value at an arbitrary nonzero point.
    pub fn eval_point(&self, xi: &PVector) -> Result<Complex64> {
        let p = self.p;
        let exps: Vec<Option<i64>> = xi.coords().iter().map(|c| c.norm().exponent()).collect();
        let radial = exps.iter().flatten().max().copied();
        let singular = || Error::Symbol(format!("{self} evaluated at a singular point {xi}"));
        Ok(match &self.kind {
            SymbolKind::Custom { f, .. } => f(xi),
            SymbolKind::Product(a, b) => a.eval_point(xi)? * b.eval_point(xi)?,
            SymbolKind::Reciprocal(a) => {
                let v = a.eval_point(xi)?;
                if v.norm() < ZERO_TOLERANCE {
                    return Err(Error::NonInvertible(xi.to_string()));
                }
                1.0 / v
            }
            SymbolKind::Transposed(a) => {
                let minus = PRational::from_int(p, -1)?;
                a.eval_point(&xi.scale(&minus))?
            }
            SymbolKind::Taibleson(a) => ppow(p, a * radial.ok_or_else(singular)? as f64),
            SymbolKind::Laplacian2 => Complex64::new(
                -(p as f64).powi(2 * radial.ok_or_else(singular)? as i32),
                0.0,
            ),
            SymbolKind::Poly { coeffs, alpha } => {
                poly::eval(coeffs, ppow(p, alpha * radial.ok_or_else(singular)? as f64))
            }
            SymbolKind::Vladimirov(alphas) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for (e, a) in exps.iter().zip(alphas) {
                    acc *= ppow(p, a * e.ok_or_else(singular)? as f64);
                }
                acc
            }
            SymbolKind::Laplacian1 => {
                let mut acc = 0.0;
                for e in &exps {
                    acc -= (p as f64).powi(2 * e.ok_or_else(singular)? as i32);
                }
                Complex64::new(acc, 0.0)
            }
        })
    }

    /// The solvability hypothesis `P(z) ≠ 0 for z > 0` of every polynomial factor.
    pub fn check_solvable(&self) -> Result<()> {
        match &self.kind {
            SymbolKind::Poly { coeffs, .. } => {
                if let Some(z) = poly::positive_real_roots(coeffs).first() {
                    return Err(Error::Unsolvable(format!(
                        "P(z) = 0 at z = {z} > 0, but the equation is uniquely solvable only when P(z) ≠ 0 for all z > 0"
                    )));
                }
                Ok(())
            }
            SymbolKind::Product(a, b) => {
                a.check_solvable()?;
                b.check_solvable()
            }
            SymbolKind::Transposed(a) => a.check_solvable(),
            _ => Ok(()),
        }
    }
}

/// Output of [`apply_report`].
#[derive(Clone, Debug)]
pub struct OperatorReport {
    pub output: TestFunction,
    pub grid: Grid,
    /// Spectral cells inside the admissible region where the symbol vanishes.
    pub symbol_zeros: usize,
}

fn check_operands(sym: &Symbol, phi: &TestFunction, kind: LizorkinKind) -> Result<()> {
    if phi.p() != sym.p {
        return Err(Error::PrimeMismatch(sym.p, phi.p()));
    }
    if phi.n() != sym.n {
        return Err(Error::DimensionMismatch(sym.n, phi.n()));
    }
    if sym.needs_first_kind() && kind != LizorkinKind::FirstKind {
        return Err(Error::Symbol(format!(
            "{sym} is singular on the coordinate hyperplanes and acts on first-kind Lizorkin functions only"
        )));
    }
    require_phi(phi, kind)
}

/// `Aφ = F⁻¹[𝒜·F[φ]]` for `φ` in the Lizorkin space of `kind`.
pub fn apply(sym: &Symbol, phi: &TestFunction, kind: LizorkinKind) -> Result<TestFunction> {
    Ok(apply_report(sym, phi, kind)?.output)
}

pub fn apply_report(
    sym: &Symbol,
    phi: &TestFunction,
    kind: LizorkinKind,
) -> Result<OperatorReport> {
    check_operands(sym, phi, kind)?;
    let spectrum = phi.fourier();
    let sgrid = *spectrum.grid();
    let values = sym.values(&sgrid, kind)?;
    let excluded_zero = |flat: usize| {
        let d = sgrid.multi_index(flat);
        match kind {
            LizorkinKind::SecondKind => d.iter().all(|&x| x == 0),
            LizorkinKind::FirstKind => d.iter().any(|&x| x == 0),
        }
    };
    let symbol_zeros = values
        .iter()
        .enumerate()
        .filter(|(flat, v)| v.norm() < ZERO_TOLERANCE && !excluded_zero(*flat))
        .count();
    let coeffs = spectrum
        .coeffs()
        .iter()
        .zip(&values)
        .map(|(a, b)| a * b)
        .collect();
    let output = TestFunction::from_coeffs(sgrid, coeffs)?.inverse_fourier();
    Ok(OperatorReport {
        grid: *output.grid(),
        output,
        symbol_zeros,
    })
}

/// `⟨Af, φ⟩ = ⟨f, Aᵀφ⟩`.
pub fn apply_dist(sym: &Symbol, f: &Distribution, kind: LizorkinKind) -> Result<Distribution> {
    if f.p() != sym.p {
        return Err(Error::PrimeMismatch(sym.p, f.p()));
    }
    if f.n() != sym.n {
        return Err(Error::DimensionMismatch(sym.n, f.n()));
    }
    let transposed = sym.transpose();
    let inner = f.clone();
    let name = format!("({sym}) {}", f.name());
    Ok(Distribution::new(sym.p, sym.n, name, move |phi| {
        inner.pair(&apply(&transposed, phi, kind)?)
    }))
}

/// Solves `Af = g` on the Lizorkin space of `kind`: `f = A⁻¹g`.
pub fn solve(sym: &Symbol, g: &TestFunction, kind: LizorkinKind) -> Result<TestFunction> {
    sym.check_solvable()?;
    apply(&sym.inverse(), g, kind)
}

/// Solves `Af = g` for a Lizorkin functional `g`.
pub fn solve_dist(sym: &Symbol, g: &Distribution, kind: LizorkinKind) -> Result<Distribution> {
    sym.check_solvable()?;
    apply_dist(&sym.inverse(), g, kind)
}

/// `(D^α φ)(x) = ⟨κ_{−α}(y), φ(x − y)⟩` evaluated at every cell of φ's grid
/// by the regularized kernel sums, independently of the Fourier route.
pub fn convolution_oracle(alpha: Complex64, phi: &TestFunction) -> Result<TestFunction> {
    require_phi(phi, LizorkinKind::SecondKind)?;
    let grid = *phi.grid();
    let weights =
        CatalogEntry::new(grid.p, grid.n, EntryKind::RieszKappa(-alpha))?.weights(&grid)?;
    convolve_weights(&weights, phi)
}

/// `(D^α_× φ)(x) = ⟨f_{−α₁}(y₁)×⋯×f_{−αₙ}(yₙ), φ(x − y)⟩`, the kernel route
/// of the Vladimirov operator on first-kind Lizorkin functions.
pub fn vladimirov_oracle(alphas: &[Complex64], phi: &TestFunction) -> Result<TestFunction> {
    require_phi(phi, LizorkinKind::FirstKind)?;
    let grid = *phi.grid();
    if alphas.len() != grid.n {
        return Err(Error::DimensionMismatch(grid.n, alphas.len()));
    }
    let kernel = EntryKind::MultiRiesz(alphas.iter().map(|a| -a).collect());
    let weights = CatalogEntry::new(grid.p, grid.n, kernel)?.weights(&grid)?;
    convolve_weights(&weights, phi)
}

/// `Σ_m W_m φ(x − y_m)` at every cell `x`; differences wrap modulo `B_l`.
fn convolve_weights(weights: &[Complex64], phi: &TestFunction) -> Result<TestFunction> {
    let grid = *phi.grid();
    let side = grid.side();
    let n = grid.n;
    let digits: Vec<Vec<u64>> = (0..grid.cells()).map(|i| grid.multi_index(i)).collect();
    let support: Vec<usize> = (0..grid.cells())
        .filter(|&m| !weights[m].is_zero())
        .collect();
    let coeffs = (0..grid.cells())
        .into_par_iter()
        .map(|x| {
            let dx = &digits[x];
            let mut acc = Complex64::zero();
            for &m in &support {
                let dm = &digits[m];
                let mut flat = 0usize;
                for j in 0..n {
                    flat = flat * side + (dx[j] as usize + side - dm[j] as usize) % side;
                }
                acc += weights[m] * phi.coeffs()[flat];
            }
            acc
        })
        .collect();
    TestFunction::from_coeffs(grid, coeffs)
}

#[cfg(test)]
mod tests;
