//! Exact integer combinations of roots of unity, `Σ c_k ζ_N^k`, with an exact
//! zero test by reduction modulo the cyclotomic polynomial `Φ_N`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::padic::root_of_unity;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    order: u64,
    coeffs: BTreeMap<u64, i64>,
}

impl RootSum {
    pub fn new(order: u64) -> Self {
        assert!(order > 0, "roots of unity need a positive order");
        RootSum {
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Adds `c·ζ_N^k`.
    pub fn add_term(&mut self, k: i128, c: i64) {
        let k = k.rem_euclid(self.order as i128) as u64;
        let e = self.coeffs.entry(k).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&k);
        }
    }

    /// Numerical value, summed in increasing exponent order.
    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&k, &c)| root_of_unity(k as i128, self.order as u128) * c as f64)
            .sum()
    }

    /// Exact test for `Σ c_k ζ_N^k = 0` in ℚ(ζ_N).
    pub fn is_zero(&self) -> bool {
        if self.coeffs.is_empty() {
            return true;
        }
        let phi = cyclotomic_polynomial(self.order);
        let mut rem = vec![0i128; self.order as usize];
        for (&k, &c) in &self.coeffs {
            rem[k as usize] += c as i128;
        }
        reduce_mod_monic(&mut rem, &phi);
        rem.iter().all(|&c| c == 0)
    }
}

/// Reduces `a` (coefficients in increasing degree) modulo the monic polynomial `m`
/// in place; afterwards only the entries below `deg m` can be nonzero.
fn reduce_mod_monic(a: &mut [i128], m: &[i128]) {
    let d = m.len() - 1;
    for top in (d..a.len()).rev() {
        let c = a[top];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            a[top - d + i] -= c * mi;
        }
    }
}

/// `Φ_n(x)` as coefficients in increasing degree.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i128> {
    // x^d − 1 = Π_{e | d} Φ_e(x); build Φ_d for every divisor d of n bottom-up.
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut known: BTreeMap<u64, Vec<i128>> = BTreeMap::new();
    for &d in &divisors {
        let mut poly = vec![0i128; d as usize + 1];
        poly[0] = -1;
        poly[d as usize] = 1;
        for (&e, phi_e) in &known {
            if d % e == 0 {
                poly = exact_divide(&poly, phi_e);
            }
        }
        known.insert(d, poly);
    }
    known.remove(&n).expect("n divides itself")
}

fn exact_divide(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i128; num.len() - dd];
    for top in (dd..num.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        quot[top - dd] = c;
        for (i, &di) in den.iter().enumerate() {
            rem[top - dd + i] -= c * di;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "cyclotomic division is exact");
    quot
}
