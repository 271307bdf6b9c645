//! Distributions as pairing functionals `φ ↦ ⟨f, φ⟩`, with dilation, Fourier
//! transform by duality and a homogeneity checker.

pub mod catalog;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{MultCharacter, PNorm, PRational, PVector};
use crate::schwartz::TestFunction;

pub use catalog::{CatalogEntry, EntryKind};

type PairFn = dyn Fn(&TestFunction) -> Result<Complex64> + Send + Sync;

/// `f(tx) = π_α(t) f(x) + Σ_{j=1}^{m} π_α(t) log_p^j|t|ₚ f_{m−j}(x)`.
#[derive(Clone, Debug)]
pub struct Homogeneity {
    pub degree: MultCharacter,
    pub order: usize,
    /// `companions[j−1] = f_{m−j}` for `j = 1..=m`.
    pub companions: Vec<Distribution>,
}

/// A linear functional on test functions over ℚₚⁿ.
#[derive(Clone)]
pub struct Distribution {
    p: u64,
    n: usize,
    name: String,
    pair: Arc<PairFn>,
    homogeneity: Option<Arc<Homogeneity>>,
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Distribution({}, p={}, n={})", self.name, self.p, self.n)
    }
}

impl Distribution {
    pub fn new(
        p: u64,
        n: usize,
        name: impl Into<String>,
        pair: impl Fn(&TestFunction) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Distribution {
            p,
            n,
            name: name.into(),
            pair: Arc::new(pair),
            homogeneity: None,
        }
    }

    pub fn with_homogeneity(mut self, h: Homogeneity) -> Self {
        self.homogeneity = Some(Arc::new(h));
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Advisory homogeneity annotation; [`check_homogeneity`] is the ground truth.
    pub fn homogeneity(&self) -> Option<&Homogeneity> {
        self.homogeneity.as_deref()
    }

    pub fn pair(&self, phi: &TestFunction) -> Result<Complex64> {
        if phi.p() != self.p {
            return Err(Error::PrimeMismatch(self.p, phi.p()));
        }
        if phi.n() != self.n {
            return Err(Error::DimensionMismatch(self.n, phi.n()));
        }
        (self.pair)(phi)
    }

    /// `δ(x)`.
    pub fn delta(p: u64, n: usize) -> Result<Self> {
        Ok(CatalogEntry::new(p, n, EntryKind::Delta)?.distribution())
    }

    /// The regular functional `φ ↦ ∫ g φ`.
    pub fn regular(g: TestFunction) -> Self {
        let (p, n) = (g.p(), g.n());
        Distribution::new(p, n, "regular", move |phi| {
            Ok(g.multiply_pointwise(phi)?.integrate())
        })
    }

    /// The function `x ↦ χₚ(z·x)`; its pairing is `F[φ](z)`.
    pub fn character(z: &PVector) -> Self {
        let z = z.clone();
        Distribution::new(z.p(), z.n(), format!("chi({z}·x)"), move |phi| {
            phi.fourier().evaluate(&z)
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let inner = self.clone();
        let mut out =
            Distribution::new(self.p, self.n, format!("({c})·{}", self.name), move |phi| {
                Ok(c * inner.pair(phi)?)
            });
        if let Some(h) = &self.homogeneity {
            out.homogeneity = Some(Arc::new(Homogeneity {
                degree: h.degree,
                order: h.order,
                companions: h.companions.iter().map(|f| f.scale(c)).collect(),
            }));
        }
        out
    }

    pub fn add(&self, other: &Distribution) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(Distribution::new(
            self.p,
            self.n,
            format!("{} + {}", self.name, other.name),
            move |phi| Ok(a.pair(phi)? + b.pair(phi)?),
        ))
    }

    /// `⟨f(tx), φ⟩ = |t|ₚ^{−n} ⟨f, φ(x/t)⟩`.
    pub fn dilate(&self, t: &PRational) -> Result<Self> {
        if t.p() != self.p {
            return Err(Error::PrimeMismatch(t.p(), self.p));
        }
        let k = match t.norm() {
            PNorm::Zero => return Err(Error::Domain("dilation by t = 0".into())),
            PNorm::Pow(k) => k,
        };
        let factor = (self.p as f64).powi(-(self.n as i64 * k) as i32);
        let inner = self.clone();
        let t = t.clone();
        Ok(Distribution::new(
            self.p,
            self.n,
            format!("{}({t}·x)", self.name),
            move |phi| Ok(inner.pair(&phi.dilate_arg(&t)?)? * factor),
        ))
    }

    /// `⟨F[f], φ⟩ = ⟨f, F[φ]⟩`.
    pub fn fourier(&self) -> Self {
        let inner = self.clone();
        Distribution::new(self.p, self.n, format!("F[{}]", self.name), move |phi| {
            inner.pair(&phi.fourier())
        })
    }

    /// `⟨F⁻¹[f], φ⟩ = ⟨f, F⁻¹[φ]⟩`.
    pub fn inverse_fourier(&self) -> Self {
        let inner = self.clone();
        Distribution::new(self.p, self.n, format!("F^-1[{}]", self.name), move |phi| {
            inner.pair(&phi.inverse_fourier())
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub checks: usize,
    pub max_abs_residual: f64,
    /// Residual relative to `max(1, |⟨f(tx), φ⟩|)`.
    pub max_rel_residual: f64,
}

/// Checks `⟨f(tx),φ⟩ = π_α(t)⟨f,φ⟩ + Σ_j π_α(t) log_p^j|t|ₚ ⟨f_{m−j},φ⟩` for
/// every pair `(φ, t)`.
pub fn check_homogeneity(
    f: &Distribution,
    degree: &MultCharacter,
    order: usize,
    companions: &[Distribution],
    phis: &[TestFunction],
    ts: &[PRational],
) -> Result<HomogeneityReport> {
    if companions.len() != order {
        return Err(Error::Domain(format!(
            "order {order} needs {order} lower-order companions, got {}",
            companions.len()
        )));
    }
    let mut report = HomogeneityReport {
        checks: 0,
        max_abs_residual: 0.0,
        max_rel_residual: 0.0,
    };
    for t in ts {
        let pi_t = degree.eval(t)?;
        let s = t.norm().exponent().expect("eval rejects t = 0") as f64;
        let dilated = f.dilate(t)?;
        for phi in phis {
            let lhs = dilated.pair(phi)?;
            let mut rhs = pi_t * f.pair(phi)?;
            for (j, g) in companions.iter().enumerate() {
                rhs += pi_t * s.powi(j as i32 + 1) * g.pair(phi)?;
            }
            let r = (lhs - rhs).norm();
            report.checks += 1;
            report.max_abs_residual = report.max_abs_residual.max(r);
            report.max_rel_residual = report.max_rel_residual.max(r / lhs.norm().max(1.0));
        }
    }
    Ok(report)
}

/// [`check_homogeneity`] against the distribution's own annotation.
pub fn check_annotated(
    f: &Distribution,
    phis: &[TestFunction],
    ts: &[PRational],
) -> Result<HomogeneityReport> {
    let h = f
        .homogeneity()
        .ok_or_else(|| Error::Domain(format!("{} carries no homogeneity annotation", f.name())))?;
    check_homogeneity(f, &h.degree, h.order, &h.companions, phis, ts)
}
