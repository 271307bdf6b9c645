use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padic_core::lizorkin::{is_phi, random_phi};
use padic_core::operators::{apply, apply_dist, convolution_oracle, solve, Symbol};
use padic_core::{Distribution, Grid, LizorkinKind, PVector, TestFunction};

fn order() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn setting() -> impl Strategy<Value = (u64, usize, i64, i64)> {
    (
        prop_oneof![Just(2u64), Just(3)],
        1usize..=2,
        -2i64..=0,
        1i64..=2,
    )
        .prop_map(|(p, n, l, d)| (p, n, l, l + d))
}

fn lizorkin(s: (u64, usize, i64, i64), kind: LizorkinKind, seed: u64) -> TestFunction {
    let grid = Grid::new(s.0, s.1, s.2, s.3).unwrap();
    random_phi(grid, kind, 5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn sup_rel(a: &TestFunction, b: &TestFunction) -> f64 {
    a.max_abs_diff(b).unwrap() / b.sup_norm().max(1e-300)
}

/// `1 + i·[unit residue of the largest coordinate]`, not even for `p > 2`.
fn residue_symbol(p: u64, n: usize) -> Symbol {
    Symbol::custom(p, n, "residue", |xi: &PVector| {
        let lead = xi.coords().iter().max_by_key(|x| x.norm()).unwrap();
        Complex64::new(1.0, lead.unit_residue().unwrap_or(0) as f64)
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn builtin_operators_preserve_lizorkin_spaces(s in setting(), seed: u64, a in order(), b in order()) {
        let (p, n) = (s.0, s.1);
        let second = lizorkin(s, LizorkinKind::SecondKind, seed);
        let first = lizorkin(s, LizorkinKind::FirstKind, seed);
        let vlad: Vec<Complex64> = (0..n).map(|j| if j == 0 { a } else { b }).collect();
        let cases = [
            (Symbol::taibleson(p, n, a).unwrap(), &second, LizorkinKind::SecondKind),
            (Symbol::taibleson(p, n, a).unwrap(), &first, LizorkinKind::FirstKind),
            (Symbol::laplacian2(p, n).unwrap(), &second, LizorkinKind::SecondKind),
            (Symbol::poly(p, n, vec![Complex64::new(1.0, 0.0), b], a).unwrap(), &second, LizorkinKind::SecondKind),
            (Symbol::vladimirov(p, vlad).unwrap(), &first, LizorkinKind::FirstKind),
            (Symbol::laplacian1(p, n).unwrap(), &first, LizorkinKind::FirstKind),
        ];
        for (sym, phi, kind) in cases {
            let out = apply(&sym, phi, kind).unwrap();
            prop_assert!(is_phi(&out, kind, 0.0).holds, "{sym} on the {kind}");
        }
    }

    #[test]
    fn taibleson_group_law(s in setting(), seed: u64, a in order(), b in order()) {
        let (p, n) = (s.0, s.1);
        let kind = LizorkinKind::SecondKind;
        let phi = lizorkin(s, kind, seed);
        let (da, db) = (Symbol::taibleson(p, n, a).unwrap(), Symbol::taibleson(p, n, b).unwrap());
        let two = apply(&da, &apply(&db, &phi, kind).unwrap(), kind).unwrap();
        let one = apply(&Symbol::taibleson(p, n, a + b).unwrap(), &phi, kind).unwrap();
        prop_assert!(two.max_abs_diff(&one).unwrap() <= 1e-10 * phi.sup_norm());
        let back = apply(&da.inverse(), &apply(&da, &phi, kind).unwrap(), kind).unwrap();
        prop_assert!(back.max_abs_diff(&phi).unwrap() <= 1e-10 * phi.sup_norm());
    }

    #[test]
    fn vladimirov_group_law(s in setting(), seed: u64, a in order(), b in order()) {
        let (p, n) = (s.0, s.1);
        let kind = LizorkinKind::FirstKind;
        let phi = lizorkin(s, kind, seed);
        let da = Symbol::vladimirov(p, vec![a; n]).unwrap();
        let db = Symbol::vladimirov(p, vec![b; n]).unwrap();
        let two = apply(&da, &apply(&db, &phi, kind).unwrap(), kind).unwrap();
        let one = apply(&da.compose(&db).unwrap(), &phi, kind).unwrap();
        prop_assert!(two.max_abs_diff(&one).unwrap() <= 1e-10 * phi.sup_norm());
    }

    #[test]
    fn multiplier_matches_kernel(s in setting(), seed: u64, a in order()) {
        prop_assume!(s.0.pow((s.1 * (s.3 - s.2) as usize) as u32) <= 81);
        let phi = lizorkin(s, LizorkinKind::SecondKind, seed);
        let fourier = apply(&Symbol::taibleson(s.0, s.1, a).unwrap(), &phi, LizorkinKind::SecondKind).unwrap();
        let kernel = convolution_oracle(a, &phi).unwrap();
        prop_assert!(sup_rel(&fourier, &kernel) <= 1e-9);
    }

    #[test]
    fn solve_inverts_apply(s in setting(), seed: u64, a in order()) {
        let kind = LizorkinKind::SecondKind;
        let g = lizorkin(s, kind, seed);
        let sym = Symbol::poly(s.0, s.1, vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)], a).unwrap();
        let u = solve(&sym, &g, kind).unwrap();
        prop_assert!(apply(&sym, &u, kind).unwrap().max_abs_diff(&g).unwrap() <= 1e-10 * g.sup_norm());
    }

    #[test]
    fn distributional_action_uses_the_reflected_symbol(seeds: (u64, u64), n in 1usize..=2) {
        let s = (3, n, -1, 1);
        let kind = LizorkinKind::SecondKind;
        let (g, phi) = (lizorkin(s, kind, seeds.0), lizorkin(s, kind, seeds.1));
        let sym = residue_symbol(3, n);
        let direct = apply(&sym, &g, kind).unwrap().multiply_pointwise(&phi).unwrap().integrate();
        let dual = apply_dist(&sym, &Distribution::regular(g), kind).unwrap().pair(&phi).unwrap();
        prop_assert!((direct - dual).norm() <= 1e-10 * direct.norm().max(1.0));
    }
}
