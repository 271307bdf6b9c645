use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Returns true when `p` is prime (trial division; primes here are small).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{p} is not prime")))
    }
}

/// Splits `n = p^k * rest` with `p ∤ rest`; `n` must be nonzero.
fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut k = 0u32;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return (k, rest);
        }
        rest = q;
        k += 1;
    }
}

/// Inverse of `a` modulo `m` (assumes gcd(a, m) = 1).
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// The p-adic norm of a nonzero element, stored as the exponent `e` in `p^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PNorm {
    Zero,
    Pow(i64),
}

impl PNorm {
    pub fn exponent(self) -> Option<i64> {
        match self {
            PNorm::Zero => None,
            PNorm::Pow(e) => Some(e),
        }
    }

    pub fn to_f64(self, p: u64) -> f64 {
        match self {
            PNorm::Zero => 0.0,
            PNorm::Pow(e) => (p as f64).powi(e as i32),
        }
    }
}

impl PartialOrd for PNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PNorm::Zero, PNorm::Zero) => Ordering::Equal,
            (PNorm::Zero, _) => Ordering::Less,
            (_, PNorm::Zero) => Ordering::Greater,
            (PNorm::Pow(a), PNorm::Pow(b)) => a.cmp(b),
        }
    }
}

/// An exact rational number viewed as an element of ℚₚ.
///
/// Elements of ℤ[1/p] (finite p-adic expansions) are the common case, but any
/// rational is accepted so that, e.g., 1/3 can be handled as a 2-adic integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PRational {
    p: u64,
    value: BigRational,
}

impl PRational {
    pub fn new(p: u64, value: BigRational) -> Result<Self> {
        check_prime(p)?;
        Ok(PRational { p, value })
    }

    pub(crate) fn new_unchecked(p: u64, value: BigRational) -> Self {
        PRational { p, value }
    }

    pub fn zero(p: u64) -> Result<Self> {
        Self::new(p, BigRational::zero())
    }

    pub fn from_int(p: u64, v: i64) -> Result<Self> {
        Self::new(p, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(p: u64, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::new(p, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `num / p^exp`.
    pub fn from_parts(p: u64, num: BigInt, exp: u32) -> Result<Self> {
        let den = num_traits::pow(BigInt::from(p), exp as usize);
        Self::new(p, BigRational::new(num, den))
    }

    /// `p^k` for any integer `k`.
    pub fn p_power(p: u64, k: i64) -> Result<Self> {
        let base = BigInt::from(p);
        let v = if k >= 0 {
            BigRational::from_integer(num_traits::pow(base, k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(base, (-k) as usize))
        };
        Self::new(p, v)
    }

    /// Parses `"num/p^exp"`, `"num/den"` or a plain integer.
    pub fn parse(s: &str, p: u64) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse p-adic rational {s:?}"));
        let (num_s, den_s) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num: BigInt = num_s.parse().map_err(|_| bad())?;
        let den = match den_s {
            None => BigInt::one(),
            Some(d) => match d.split_once('^') {
                Some((base, e)) => {
                    let base: u64 = base.trim().parse().map_err(|_| bad())?;
                    if base != p {
                        return Err(Error::PrimeMismatch(base, p));
                    }
                    let e: u32 = e.trim().parse().map_err(|_| bad())?;
                    num_traits::pow(BigInt::from(p), e as usize)
                }
                None => d.parse().map_err(|_| bad())?,
            },
        };
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::new(p, BigRational::new(num, den))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// The p-adic valuation `v` with `|x|ₚ = p^{-v}`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.value.is_zero() {
            return None;
        }
        let (a, _) = split_p(self.value.numer(), self.p);
        let (b, _) = split_p(self.value.denom(), self.p);
        Some(a as i64 - b as i64)
    }

    pub fn norm(&self) -> PNorm {
        match self.valuation() {
            None => PNorm::Zero,
            Some(v) => PNorm::Pow(-v),
        }
    }

    /// Returns `(num, exp)` with value `num / p^exp` when the denominator is a
    /// power of p, in canonical form (`exp = 0` or `p ∤ num`).
    pub fn to_parts(&self) -> Option<(BigInt, u32)> {
        let (e, rest) = split_p(self.value.denom(), self.p);
        if rest.abs().is_one() {
            Some((self.value.numer() * rest.signum(), e))
        } else {
            None
        }
    }

    /// The fractional part `{x}ₚ ∈ [0, 1)`, a rational with p-power denominator.
    pub fn frac_part(&self) -> BigRational {
        if self.value.is_zero() {
            return BigRational::zero();
        }
        let (e, unit_den) = split_p(self.value.denom(), self.p);
        if e == 0 {
            return BigRational::zero();
        }
        let modulus = num_traits::pow(BigInt::from(self.p), e as usize);
        let r = (self.value.numer() * mod_inverse(&unit_den, &modulus)).mod_floor(&modulus);
        BigRational::new(r, modulus)
    }

    /// `x mod p^k` for a p-adic integer `x`; `None` when `|x|ₚ > 1`.
    pub fn residue(&self, k: u32) -> Option<u64> {
        if self.value.is_zero() {
            return Some(0);
        }
        if self.valuation()? < 0 {
            return None;
        }
        let modulus = num_traits::pow(BigInt::from(self.p), k as usize);
        if k == 0 {
            return Some(0);
        }
        let inv = mod_inverse(&self.value.denom().mod_floor(&modulus), &modulus);
        (self.value.numer() * inv).mod_floor(&modulus).to_u64()
    }

    /// The unit part `x·|x|ₚ`, a p-adic unit (zero maps to zero).
    pub fn unit_part(&self) -> PRational {
        match self.valuation() {
            None => self.clone(),
            Some(v) => self.mul_p_power(-v),
        }
    }

    /// Residue of the unit part modulo p (in `1..p`); `None` for zero.
    pub fn unit_residue(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        self.unit_part().residue(1)
    }

    /// `x · p^k`.
    pub fn mul_p_power(&self, k: i64) -> PRational {
        let base = BigInt::from(self.p);
        let value = if k >= 0 {
            &self.value * BigRational::from_integer(num_traits::pow(base, k as usize))
        } else {
            &self.value / BigRational::from_integer(num_traits::pow(base, (-k) as usize))
        };
        PRational { p: self.p, value }
    }

    pub fn checked_div(&self, other: &PRational) -> Result<PRational> {
        self.same_prime(other)?;
        if other.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(PRational {
            p: self.p,
            value: &self.value / &other.value,
        })
    }

    pub fn recip(&self) -> Result<PRational> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(PRational {
            p: self.p,
            value: self.value.recip(),
        })
    }

    fn same_prime(&self, other: &PRational) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait<&PRational> for &PRational {
            type Output = PRational;
            fn $method(self, rhs: &PRational) -> PRational {
                assert_eq!(self.p, rhs.p, "p-adic operands carry different primes");
                PRational { p: self.p, value: &self.value $op &rhs.value }
            }
        }
        impl std::ops::$trait<PRational> for PRational {
            type Output = PRational;
            fn $method(self, rhs: PRational) -> PRational {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl std::ops::Neg for &PRational {
    type Output = PRational;
    fn neg(self) -> PRational {
        PRational {
            p: self.p,
            value: -&self.value,
        }
    }
}

impl std::ops::Neg for PRational {
    type Output = PRational;
    fn neg(self) -> PRational {
        -&self
    }
}

impl fmt::Display for PRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_parts() {
            Some((num, 0)) => write!(f, "{num}"),
            Some((num, e)) => write!(f, "{num}/{}^{e}", self.p),
            None => write!(f, "{}/{}", self.value.numer(), self.value.denom()),
        }
    }
}

/// A point of ℚₚⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PVector {
    coords: Vec<PRational>,
}

impl PVector {
    pub fn new(coords: Vec<PRational>) -> Result<Self> {
        let first = coords
            .first()
            .ok_or_else(|| Error::Domain("a p-adic vector needs at least one coordinate".into()))?;
        for c in &coords {
            first.same_prime(c)?;
        }
        Ok(PVector { coords })
    }

    pub fn scalar(x: PRational) -> Self {
        PVector { coords: vec![x] }
    }

    pub fn zero(p: u64, n: usize) -> Result<Self> {
        Self::new(vec![PRational::zero(p)?; n.max(1)])
    }

    pub fn p(&self) -> u64 {
        self.coords[0].p
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[PRational] {
        &self.coords
    }

    /// Max norm over the coordinates.
    pub fn norm(&self) -> PNorm {
        self.coords
            .iter()
            .map(PRational::norm)
            .max()
            .unwrap_or(PNorm::Zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(PRational::is_zero)
    }

    pub fn dot(&self, other: &PVector) -> PRational {
        assert_eq!(
            self.n(),
            other.n(),
            "dot product of vectors of different dimension"
        );
        self.coords.iter().zip(&other.coords).fold(
            PRational::new_unchecked(self.p(), BigRational::zero()),
            |acc, (a, b)| &acc + &(a * b),
        )
    }

    pub fn scale(&self, t: &PRational) -> PVector {
        PVector {
            coords: self.coords.iter().map(|c| c * t).collect(),
        }
    }
}

impl fmt::Display for PVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
