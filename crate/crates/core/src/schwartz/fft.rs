//! Radix-p Cooley–Tukey transform over (ℤ/p^L)ⁿ.

use num_complex::Complex64;

use crate::padic::root_of_unity;

/// Precomputed data for a length-`p^depth` transform with kernel `exp(sign·2πi·jk/size)`.
pub(crate) struct Plan {
    p: usize,
    depth: u32,
    size: usize,
    twiddles: Vec<Complex64>,
    reversal: Vec<usize>,
}

impl Plan {
    pub(crate) fn new(p: u64, depth: u32, sign: i32) -> Plan {
        let p = p as usize;
        let size = p.pow(depth);
        let twiddles = (0..size)
            .map(|j| root_of_unity(sign as i128 * j as i128, size as u128))
            .collect();
        let reversal = (0..size)
            .map(|i| {
                let mut x = i;
                let mut r = 0;
                for _ in 0..depth {
                    r = r * p + x % p;
                    x /= p;
                }
                r
            })
            .collect();
        Plan {
            p,
            depth,
            size,
            twiddles,
            reversal,
        }
    }

    fn run(&self, line: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let (p, size) = (self.p, self.size);
        scratch.clear();
        scratch.extend(self.reversal.iter().map(|&r| line[r]));
        let mut gathered = vec![Complex64::default(); p];
        let mut len = 1usize;
        for _ in 0..self.depth {
            let sub = len;
            len *= p;
            let stride = size / len;
            for block in (0..size).step_by(len) {
                for k in 0..sub {
                    for (r, g) in gathered.iter_mut().enumerate() {
                        *g = scratch[block + r * sub + k];
                    }
                    for q in 0..p {
                        let e = k + q * sub;
                        let mut acc = gathered[0];
                        for (r, g) in gathered.iter().enumerate().skip(1) {
                            let w = self.twiddles[((r * e) % len) * stride];
                            acc += w * g;
                        }
                        scratch[block + e] = acc;
                    }
                }
            }
        }
        line.copy_from_slice(scratch);
    }
}

/// In-place separable transform of an n-dimensional array with `side = p^depth`
/// entries per axis, stored in lexicographic order. Axes are processed 0..n.
pub(crate) fn transform(data: &mut [Complex64], p: u64, depth: u32, n: usize, sign: i32) {
    if depth == 0 {
        return;
    }
    let plan = Plan::new(p, depth, sign);
    let side = plan.size;
    let mut line = vec![Complex64::default(); side];
    let mut scratch = Vec::with_capacity(side);
    for axis in 0..n {
        let stride = side.pow((n - 1 - axis) as u32);
        let outer = data.len() / (side * stride);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * side * stride + inner;
                for (t, v) in line.iter_mut().enumerate() {
                    *v = data[base + t * stride];
                }
                plan.run(&mut line, &mut scratch);
                for (t, v) in line.iter().enumerate() {
                    data[base + t * stride] = *v;
                }
            }
        }
    }
}
