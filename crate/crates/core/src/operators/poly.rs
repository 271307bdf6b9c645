//! Complex polynomial roots by simultaneous (Durand–Kerner) iteration.

use num_complex::Complex64;

/// Drops trailing zero coefficients (coefficients are in increasing degree).
pub fn trim(coeffs: &[Complex64]) -> &[Complex64] {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1] == Complex64::new(0.0, 0.0) {
        end -= 1;
    }
    &coeffs[..end]
}

pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// All roots of the polynomial with coefficients in increasing degree.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let coeffs = trim(coeffs);
    if coeffs.len() <= 1 {
        return vec![];
    }
    let lead = coeffs[coeffs.len() - 1];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let deg = monic.len() - 1;
    // Cauchy bound for the initial circle.
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(&monic, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < 1e-15 {
            break;
        }
    }
    // One Newton polish per root.
    let deriv: Vec<Complex64> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    for r in z.iter_mut() {
        let d = eval(&deriv, *r);
        if d.norm() > 0.0 {
            *r -= eval(&monic, *r) / d;
        }
    }
    z
}

/// Roots lying on the positive real axis, up to a relative tolerance.
pub fn positive_real_roots(coeffs: &[Complex64]) -> Vec<f64> {
    let mut out: Vec<f64> = roots(coeffs)
        .into_iter()
        .filter(|r| r.re > 0.0 && r.im.abs() <= 1e-9 * r.norm().max(1.0))
        .map(|r| r.re)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}
