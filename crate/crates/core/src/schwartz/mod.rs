//! Test functions on 𝒟ᴺˡ(ℚₚⁿ): exact integration, algebra, dilation,
//! translation, convolution and the Fourier transform as a scaled DFT.

mod fft;
mod io;
pub mod random;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
pub use crate::grid::Grid;
use crate::padic::{PNorm, PRational, PVector};

pub use io::TestFunctionJson;

/// A locally constant, compactly supported function stored as one coefficient
/// per coset of `B_l` in `B_N`, in canonical lexicographic index order.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl TestFunction {
    pub fn zeros(grid: Grid) -> Self {
        TestFunction {
            grid,
            coeffs: vec![Complex64::zero(); grid.cells()],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.cells() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.cells(),
                coeffs.len()
            )));
        }
        Ok(TestFunction { grid, coeffs })
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(&[u64]) -> Complex64) -> Self {
        let coeffs = (0..grid.cells()).map(|i| f(&grid.multi_index(i))).collect();
        TestFunction { grid, coeffs }
    }

    /// `Δ_k`, the indicator of the ball `B_k`.
    pub fn indicator_ball(p: u64, n: usize, k: i64) -> Result<Self> {
        let grid = Grid::new(p, n, k, k)?;
        Ok(TestFunction {
            grid,
            coeffs: vec![Complex64::new(1.0, 0.0)],
        })
    }

    /// `Ω(|x|ₚ) = Δ₀`.
    pub fn omega(p: u64, n: usize) -> Result<Self> {
        Self::indicator_ball(p, n, 0)
    }

    /// `δ_k(x) = p^{nk} Ω(p^k |x|ₚ)`.
    pub fn delta_k(p: u64, n: usize, k: i64) -> Result<Self> {
        let grid = Grid::new(p, n, -k, -k)?;
        let height = (p as f64).powi((n as i64 * k) as i32);
        Ok(TestFunction {
            grid,
            coeffs: vec![Complex64::new(height, 0.0)],
        })
    }

    /// Indicator of the ball `center + B_r`.
    pub fn indicator_coset(center: &PVector, r: i64) -> Result<Self> {
        let big_n = match center.norm() {
            PNorm::Zero => r,
            PNorm::Pow(e) => e.max(r),
        };
        let grid = Grid::new(center.p(), center.n(), r, big_n)?;
        let mut f = TestFunction::zeros(grid);
        let idx = grid
            .locate(center)?
            .expect("center lies in its own support ball");
        f.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn p(&self) -> u64 {
        self.grid.p
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, m: &[u64]) -> Complex64 {
        self.coeffs[self.grid.flat_index(m)]
    }

    /// Value at the coset of zero, i.e. `φ(0)`.
    pub fn value_at_zero(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn evaluate(&self, x: &PVector) -> Result<Complex64> {
        Ok(match self.grid.locate(x)? {
            Some(i) => self.coeffs[i],
            None => Complex64::zero(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lossless refinement to `(l, N)` with `l ≤ self.l` and `N ≥ self.N`.
    pub fn regrid(&self, l: i64, big_n: i64) -> Result<Self> {
        let target = Grid::new(self.grid.p, self.grid.n, l, big_n)?;
        self.refine_to(&target)
    }

    pub fn refine_to(&self, target: &Grid) -> Result<Self> {
        if !self.grid.refines_to(target) {
            return Err(Error::InvalidGrid(format!(
                "cannot refine (l={}, N={}) to (l={}, N={}) without coarsening",
                self.grid.l, self.grid.big_n, target.l, target.big_n
            )));
        }
        if *target == self.grid {
            return Ok(self.clone());
        }
        let shift = (self.grid.p as u64).pow((target.big_n - self.grid.big_n) as u32);
        let old_side = self.grid.side() as u64;
        let axis: Vec<Option<usize>> = (0..target.side() as u64)
            .map(|m| (m % shift == 0).then(|| ((m / shift) % old_side) as usize))
            .collect();
        Ok(self.pull_back(*target, &axis))
    }

    /// Builds a function on `target` whose coefficient at multi-index `m` is the
    /// coefficient of `self` at `(axis[m_1], …, axis[m_n])` (zero when any entry is `None`).
    fn pull_back(&self, target: Grid, axis: &[Option<usize>]) -> Self {
        let side = target.side();
        let old_side = self.grid.side();
        let n = target.n;
        let coeffs = (0..target.cells())
            .map(|flat| {
                let mut rest = flat;
                let mut old = 0usize;
                let mut weight = 1usize;
                for _ in 0..n {
                    match axis[rest % side] {
                        Some(o) => old += o * weight,
                        None => return Complex64::zero(),
                    }
                    rest /= side;
                    weight *= old_side;
                }
                self.coeffs[old]
            })
            .collect();
        TestFunction {
            grid: target,
            coeffs,
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        let g = self.grid.common(&other.grid)?;
        let a = self.refine_to(&g)?;
        let b = other.refine_to(&g)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| f(*x, *y))
            .collect();
        Ok(TestFunction { grid: g, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn multiply_pointwise(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TestFunction {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        TestFunction {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        TestFunction {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|v| f(*v)).collect(),
        }
    }

    /// `∫φ = p^{nl} Σ coeffs`, summed in canonical order.
    pub fn integrate(&self) -> Complex64 {
        self.coeffs.iter().sum::<Complex64>() * self.grid.cell_measure()
    }

    /// `∫ φ·conj(ψ)` on the common grid.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        Ok(self.zip_with(other, |a, b| a * b.conj())?.integrate())
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (s * self.grid.cell_measure()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `sup |φ − ψ|` after refinement to a common grid.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    fn transform(&self, sign: i32) -> Self {
        let mut data = self.coeffs.clone();
        fft::transform(&mut data, self.grid.p, self.grid.depth(), self.grid.n, sign);
        let scale = self.grid.cell_measure();
        for v in data.iter_mut() {
            *v *= scale;
        }
        TestFunction {
            grid: self.grid.dual(),
            coeffs: data,
        }
    }

    /// `F[φ](ξ) = ∫ χₚ(ξ·x) φ(x) dx`, mapping grid `(l, N)` to `(−N, −l)`.
    pub fn fourier(&self) -> Self {
        self.transform(1)
    }

    /// Inverse transform with kernel `χₚ(−x·ξ)`.
    pub fn inverse_fourier(&self) -> Self {
        self.transform(-1)
    }

    /// `x ↦ φ(x/t)`, on grid `(l+k, N+k)` where `|t|ₚ = p^k`.
    pub fn dilate_arg(&self, t: &PRational) -> Result<Self> {
        if t.p() != self.grid.p {
            return Err(Error::PrimeMismatch(t.p(), self.grid.p));
        }
        let k = match t.norm() {
            PNorm::Zero => return Err(Error::Domain("dilation by t = 0".into())),
            PNorm::Pow(k) => k,
        };
        let target = Grid::new(
            self.grid.p,
            self.grid.n,
            self.grid.l + k,
            self.grid.big_n + k,
        )?;
        let depth = self.grid.depth();
        let w = t
            .unit_part()
            .recip()?
            .residue(depth)
            .expect("inverse of a unit is a unit") as u128;
        let side = self.grid.side() as u128;
        let axis: Vec<Option<usize>> = (0..side).map(|m| Some(((m * w) % side) as usize)).collect();
        Ok(self.pull_back(target, &axis))
    }

    /// `x ↦ φ(−x)`.
    pub fn reflect(&self) -> Self {
        let minus_one = PRational::from_int(self.grid.p, -1).expect("grid prime is prime");
        self.dilate_arg(&minus_one)
            .expect("reflection keeps the grid")
    }

    /// `x ↦ φ(x − a)`; the support radius grows to cover `a` when needed.
    pub fn translate(&self, a: &PVector) -> Result<Self> {
        if a.p() != self.grid.p {
            return Err(Error::PrimeMismatch(a.p(), self.grid.p));
        }
        if a.n() != self.grid.n {
            return Err(Error::DimensionMismatch(a.n(), self.grid.n));
        }
        let big_n = match a.norm() {
            PNorm::Zero => return Ok(self.clone()),
            PNorm::Pow(e) => e.max(self.grid.big_n),
        };
        let refined = self.regrid(self.grid.l, big_n)?;
        let g = refined.grid;
        let shifts: Vec<usize> = a
            .coords()
            .iter()
            .map(|c| {
                c.mul_p_power(g.big_n)
                    .residue(g.depth())
                    .expect("|a| ≤ p^N") as usize
            })
            .collect();
        let side = g.side();
        let coeffs = (0..g.cells())
            .map(|flat| {
                let m = g.multi_index(flat);
                let src: Vec<u64> = m
                    .iter()
                    .zip(&shifts)
                    .map(|(&mj, &s)| ((mj as usize + side - s) % side) as u64)
                    .collect();
                refined.coeffs[g.flat_index(&src)]
            })
            .collect();
        Ok(TestFunction { grid: g, coeffs })
    }

    /// `(φ*ψ)(x) = ∫ φ(y) ψ(x − y) dy` on grid `(max l, max N)`, by direct
    /// summation over the common refinement.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        let fine = self.grid.common(&other.grid)?;
        let coarse = Grid::new(fine.p, fine.n, self.grid.l.max(other.grid.l), fine.big_n)?;
        let a = self.refine_to(&fine)?;
        let b = other.refine_to(&fine)?;
        let side = fine.side();
        let n = fine.n;
        let measure = fine.cell_measure();
        let digits: Vec<u64> = (0..fine.cells())
            .flat_map(|y| fine.multi_index(y))
            .collect();
        let support: Vec<usize> = (0..fine.cells())
            .filter(|&y| !a.coeffs[y].is_zero())
            .collect();
        let coeffs = (0..coarse.cells())
            .map(|c| {
                // Coarse representatives m/p^N are fine representatives too.
                let x = coarse.multi_index(c);
                let mut acc = Complex64::zero();
                for &y in &support {
                    let my = &digits[y * n..(y + 1) * n];
                    let mut flat = 0usize;
                    for j in 0..n {
                        flat = flat * side + (x[j] as usize + side - my[j] as usize) % side;
                    }
                    acc += a.coeffs[y] * b.coeffs[flat];
                }
                acc * measure
            })
            .collect();
        Ok(TestFunction {
            grid: coarse,
            coeffs,
        })
    }

    /// Coarsens to `(l, N)` with `l ≥ self.l` by sampling coset representatives;
    /// only meaningful when the function is known to be constant on `B_l`.
    pub fn sample_on(&self, target: &Grid) -> Result<Self> {
        if target.p != self.grid.p || target.n != self.grid.n || target.big_n != self.grid.big_n {
            return Err(Error::InvalidGrid(
                "sampling requires the same support radius".into(),
            ));
        }
        if target.l < self.grid.l {
            return Err(Error::InvalidGrid("sampling cannot refine".into()));
        }
        let coeffs = (0..target.cells())
            .map(|c| self.coeffs[self.grid.flat_index(&target.multi_index(c))])
            .collect();
        Ok(TestFunction {
            grid: *target,
            coeffs,
        })
    }

    pub fn to_json(&self) -> TestFunctionJson {
        io::to_json(self)
    }

    pub fn from_json(json: &TestFunctionJson) -> Result<Self> {
        io::from_json(json)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("test function JSON serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: TestFunctionJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn q(p: u64, num: i64, den: i64) -> PRational {
        PRational::from_ratio(p, num, den).unwrap()
    }

    fn coset_one_mod_two() -> TestFunction {
        TestFunction::indicator_coset(&PVector::scalar(q(2, 1, 1)), -1).unwrap()
    }

    #[test]
    fn evaluation() {
        let d = TestFunction::indicator_ball(3, 1, 2).unwrap();
        assert_eq!(d.evaluate(&PVector::scalar(q(3, 1, 9))).unwrap(), c(1.0));
        assert_eq!(d.evaluate(&PVector::scalar(q(3, 1, 27))).unwrap(), c(0.0));
        let phi = coset_one_mod_two();
        assert_eq!(phi.evaluate(&PVector::scalar(q(2, 3, 1))).unwrap(), c(1.0));
        assert_eq!(phi.evaluate(&PVector::scalar(q(2, 4, 1))).unwrap(), c(0.0));
    }

    #[test]
    fn integrals() {
        assert_eq!(TestFunction::omega(5, 1).unwrap().integrate(), c(1.0));
        assert_eq!(
            TestFunction::zeros(Grid::new(2, 1, -2, 1).unwrap()).integrate(),
            c(0.0)
        );
        assert_eq!(coset_one_mod_two().integrate(), c(0.5));
    }

    #[test]
    fn fourier_of_balls() {
        for (p, n, k) in [(2, 1, 0), (3, 2, 1), (5, 1, -2), (2, 2, 3)] {
            let f = TestFunction::indicator_ball(p, n, k).unwrap().fourier();
            assert_eq!(f, TestFunction::delta_k(p, n, k).unwrap());
            assert_eq!(
                f.inverse_fourier(),
                TestFunction::indicator_ball(p, n, k).unwrap()
            );
        }
        let omega = TestFunction::omega(3, 1).unwrap();
        assert_eq!(omega.fourier(), omega);
        assert_eq!(omega.inverse_fourier(), omega);
    }

    #[test]
    fn fourier_of_coset() {
        let f = coset_one_mod_two().fourier();
        assert_eq!(f.grid(), &Grid::new(2, 1, 0, 1).unwrap());
        let v = f.evaluate(&PVector::scalar(q(2, 1, 2))).unwrap();
        assert!((v - c(-0.5)).norm() < 1e-15);
        let v0 = f.evaluate(&PVector::scalar(q(2, 0, 1))).unwrap();
        assert!((v0 - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn dilation_and_translation() {
        let omega = TestFunction::omega(2, 1).unwrap();
        assert_eq!(omega.dilate_arg(&q(2, 1, 1)).unwrap(), omega);
        assert_eq!(
            omega.dilate_arg(&q(2, 1, 2)).unwrap(),
            TestFunction::indicator_ball(2, 1, 1).unwrap()
        );
        assert!(omega.dilate_arg(&q(2, 0, 1)).is_err());
        assert_eq!(
            omega.translate(&PVector::zero(2, 1).unwrap()).unwrap(),
            omega
        );
        // Ω(x − 1/2) is the indicator of 1/2 + ℤ₂
        let moved = omega.translate(&PVector::scalar(q(2, 1, 2))).unwrap();
        assert_eq!(
            moved.evaluate(&PVector::scalar(q(2, 3, 2))).unwrap(),
            c(1.0)
        );
        assert_eq!(
            moved.evaluate(&PVector::scalar(q(2, 0, 1))).unwrap(),
            c(0.0)
        );
    }

    #[test]
    fn algebra() {
        let phi = coset_one_mod_two()
            .add(&TestFunction::omega(2, 1).unwrap())
            .unwrap();
        assert!(phi.add(&phi.scale(c(-1.0))).unwrap().is_zero());
        let d0 = TestFunction::indicator_ball(2, 1, 0).unwrap();
        let d1 = TestFunction::indicator_ball(2, 1, 1).unwrap();
        let prod = d0.multiply_pointwise(&d1).unwrap();
        assert_eq!(prod.max_abs_diff(&d0).unwrap(), 0.0);
    }

    #[test]
    fn convolution() {
        let omega = TestFunction::omega(3, 1).unwrap();
        assert_eq!(omega.convolve(&omega).unwrap(), omega);
        let phi = TestFunction::from_fn(Grid::new(3, 1, -1, 1).unwrap(), |m| c(m[0] as f64 - 2.0));
        let mut last = f64::INFINITY;
        for k in 0..4 {
            let approx = phi
                .convolve(&TestFunction::delta_k(3, 1, k).unwrap())
                .unwrap();
            let err = approx.max_abs_diff(&phi).unwrap();
            assert!(err <= last);
            last = err;
        }
        assert_eq!(last, 0.0);
    }

    #[test]
    fn norms() {
        assert_eq!(TestFunction::omega(7, 2).unwrap().l2_norm(), 1.0);
        let phi = coset_one_mod_two();
        assert!((phi.fourier().l2_norm() - phi.l2_norm()).abs() < 1e-15);
    }
}
