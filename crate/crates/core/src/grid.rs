use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{check_prime, PNorm, PRational, PVector};

/// Upper bound on the number of cells of any grid the library allocates.
pub const HARD_CELL_LIMIT: u128 = 1 << 26;

/// The index set of 𝒟ᴺˡ(ℚₚⁿ): cosets of B_l in B_N, per coordinate indexed by
/// `m ∈ [0, p^{N−l})` with representative `m/p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub p: u64,
    pub n: usize,
    pub l: i64,
    #[serde(rename = "N")]
    pub big_n: i64,
}

impl Grid {
    pub fn new(p: u64, n: usize, l: i64, big_n: i64) -> Result<Self> {
        check_prime(p)?;
        if n == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if l > big_n {
            return Err(Error::InvalidGrid(format!("l = {l} exceeds N = {big_n}")));
        }
        let cells = Self::cell_count(p, n, big_n - l);
        if cells > HARD_CELL_LIMIT {
            return Err(Error::GridTooLarge {
                cells,
                limit: HARD_CELL_LIMIT,
            });
        }
        Ok(Grid { p, n, l, big_n })
    }

    /// `p^{n·depth}`, saturating.
    pub fn cell_count(p: u64, n: usize, depth: i64) -> u128 {
        let mut c: u128 = 1;
        for _ in 0..(depth.max(0) as u128 * n as u128).min(200) {
            c = c.saturating_mul(p as u128);
        }
        c
    }

    pub fn depth(&self) -> u32 {
        (self.big_n - self.l) as u32
    }

    /// Number of cosets per axis, `p^{N−l}`.
    pub fn side(&self) -> usize {
        (self.p as usize).pow(self.depth())
    }

    pub fn cells(&self) -> usize {
        self.side().pow(self.n as u32)
    }

    /// Measure of one coset, `p^{nl}`.
    pub fn cell_measure(&self) -> f64 {
        (self.p as f64).powi((self.n as i64 * self.l) as i32)
    }

    /// Grid of the Fourier transform: `(l, N) → (−N, −l)`.
    pub fn dual(&self) -> Grid {
        Grid {
            p: self.p,
            n: self.n,
            l: -self.big_n,
            big_n: -self.l,
        }
    }

    /// Smallest grid refining both (`min l`, `max N`).
    pub fn common(&self, other: &Grid) -> Result<Grid> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Grid::new(
            self.p,
            self.n,
            self.l.min(other.l),
            self.big_n.max(other.big_n),
        )
    }

    /// Whether `other` is a refinement of `self` (finer constancy, larger support).
    pub fn refines_to(&self, other: &Grid) -> bool {
        self.p == other.p && self.n == other.n && other.l <= self.l && other.big_n >= self.big_n
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<u64> {
        let side = self.side();
        let mut m = vec![0u64; self.n];
        for j in (0..self.n).rev() {
            m[j] = (flat % side) as u64;
            flat /= side;
        }
        m
    }

    pub fn flat_index(&self, m: &[u64]) -> usize {
        let side = self.side();
        m.iter().fold(0usize, |acc, &mj| acc * side + mj as usize)
    }

    /// Canonical representative `m/p^N` of a coset.
    pub fn representative(&self, flat: usize) -> PVector {
        let coords = self
            .multi_index(flat)
            .into_iter()
            .map(|m| {
                PRational::from_int(self.p, m as i64)
                    .expect("grid prime")
                    .mul_p_power(-self.big_n)
            })
            .collect();
        PVector::new(coords).expect("grid dimension is at least one")
    }

    /// Coset index of the point `x`, or `None` when `|x|ₚ > p^N`.
    pub fn locate(&self, x: &PVector) -> Result<Option<usize>> {
        if x.p() != self.p {
            return Err(Error::PrimeMismatch(x.p(), self.p));
        }
        if x.n() != self.n {
            return Err(Error::DimensionMismatch(x.n(), self.n));
        }
        let mut m = Vec::with_capacity(self.n);
        for c in x.coords() {
            if c.norm() > PNorm::Pow(self.big_n) {
                return Ok(None);
            }
            let scaled = c.mul_p_power(self.big_n);
            m.push(
                scaled
                    .residue(self.depth())
                    .expect("scaled coordinate is a p-adic integer"),
            );
        }
        Ok(Some(self.flat_index(&m)))
    }

    /// Norm exponent `γ` of the coordinate with index `m` (`|m/p^N|ₚ = p^γ`);
    /// `None` for the coset of zero.
    pub fn axis_norm_exponent(&self, m: u64) -> Option<i64> {
        if m == 0 {
            return None;
        }
        let mut v = 0i64;
        let mut x = m;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(self.big_n - v)
    }

    /// Per-axis table of [`Grid::axis_norm_exponent`].
    pub fn axis_norm_table(&self) -> Vec<Option<i64>> {
        (0..self.side() as u64)
            .map(|m| self.axis_norm_exponent(m))
            .collect()
    }

    /// Per-axis table of unit residues mod p of the representatives (0 for the zero coset).
    pub fn axis_unit_residues(&self) -> Vec<u64> {
        (0..self.side() as u64)
            .map(|m| {
                if m == 0 {
                    return 0;
                }
                let mut x = m;
                while x % self.p == 0 {
                    x /= self.p;
                }
                x % self.p
            })
            .collect()
    }

    /// Max-norm exponent of every cell (`None` for the zero cell), in canonical order.
    pub fn cell_norm_exponents(&self) -> Vec<Option<i64>> {
        let axis = self.axis_norm_table();
        let side = self.side();
        let mut out = Vec::with_capacity(self.cells());
        for flat in 0..self.cells() {
            let mut rest = flat;
            let mut best: Option<i64> = None;
            for _ in 0..self.n {
                let e = axis[rest % side];
                rest /= side;
                best = match (best, e) {
                    (None, e) => e,
                    (b, None) => b,
                    (Some(a), Some(b)) => Some(a.max(b)),
                };
            }
            out.push(best);
        }
        out
    }
}

/// Canonical coset representatives of a grid in lexicographic index order.
pub fn enumerate_cosets(grid: &Grid) -> Vec<PVector> {
    (0..grid.cells()).map(|i| grid.representative(i)).collect()
}
