use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::distributions::{CatalogEntry, EntryKind};
use crate::grid::Grid;
use crate::lizorkin::{is_phi, random_phi};
use crate::special::gamma_p_n;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sup_rel(a: &TestFunction, b: &TestFunction) -> f64 {
    a.max_abs_diff(b).unwrap() / b.sup_norm().max(1e-300)
}

fn lizorkin(p: u64, n: usize, l: i64, big_n: i64, kind: LizorkinKind, seed: u64) -> TestFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_phi(Grid::new(p, n, l, big_n).unwrap(), kind, 5, &mut rng).unwrap()
}

#[test]
fn parses_symbol_specs() {
    assert_eq!(parse_complex("2+0.3i").unwrap(), c(2.0, 0.3));
    assert_eq!(parse_complex("−1.5").unwrap(), c(-1.5, 0.0));
    assert!(parse_complex("abc").is_err());
    let t = Symbol::parse("taibleson:alpha=0.5", 2, 1).unwrap();
    assert!(matches!(t.kind(), SymbolKind::Taibleson(a) if *a == c(0.5, 0.0)));
    let v = Symbol::parse("vladimirov:alphas=1,−1", 3, 2).unwrap();
    assert!(matches!(v.kind(), SymbolKind::Vladimirov(a) if a == &vec![c(1.0, 0.0), c(-1.0, 0.0)]));
    assert!(Symbol::parse("vladimirov:alphas=1", 3, 2).is_err());
    let q = Symbol::parse("poly:coeffs=1,0,2;alpha=1", 2, 1).unwrap();
    assert!(matches!(q.kind(), SymbolKind::Poly { coeffs, .. } if coeffs.len() == 3));
    assert!(Symbol::parse("laplacian2", 2, 3).is_ok());
    assert!(Symbol::parse("heat:t=1", 2, 1).is_err());
    assert!(Symbol::parse("taibleson", 2, 1).is_err());
    assert!(Symbol::parse("taibleson:alpha=1", 4, 1).is_err());
}

#[test]
fn phi_prime_is_an_eigenfunction() {
    let zero = PVector::scalar(PRational::zero(2).unwrap());
    let one = PVector::scalar(PRational::from_int(2, 1).unwrap());
    let even = TestFunction::indicator_coset(&zero, -1).unwrap();
    let odd = TestFunction::indicator_coset(&one, -1).unwrap();
    let phi = even.sub(&odd).unwrap();
    for alpha in [c(0.5, 0.0), c(-1.3, 2.0), c(3.0, 0.0)] {
        let out = apply(
            &Symbol::taibleson(2, 1, alpha).unwrap(),
            &phi,
            LizorkinKind::SecondKind,
        )
        .unwrap();
        let expected = phi.scale(ppow(2, alpha));
        assert!(
            sup_rel(
                &out,
                &expected.regrid(out.grid().l, out.grid().big_n).unwrap()
            ) < 1e-13
        );
    }
}

#[test]
fn zero_order_is_the_identity() {
    for kind in [LizorkinKind::SecondKind, LizorkinKind::FirstKind] {
        let phi = lizorkin(3, 2, -1, 1, kind, 7);
        let d0 = Symbol::taibleson(3, 2, c(0.0, 0.0)).unwrap();
        assert!(sup_rel(&apply(&d0, &phi, kind).unwrap(), &phi) < 1e-12);
        let v0 = Symbol::vladimirov(3, vec![c(0.0, 0.0); 2]).unwrap();
        if kind == LizorkinKind::FirstKind {
            assert!(sup_rel(&apply(&v0, &phi, kind).unwrap(), &phi) < 1e-12);
        }
    }
}

#[test]
fn group_law_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..20 {
        let (p, n) = [(2, 1), (3, 1), (2, 2)][trial % 3];
        let kind = if trial % 2 == 0 {
            LizorkinKind::SecondKind
        } else {
            LizorkinKind::FirstKind
        };
        let phi = lizorkin(p, n, -2, 1, kind, trial as u64);
        let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let b = if trial == 4 {
            n as f64 - a
        } else {
            c(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0))
        };
        let (da, db) = (
            Symbol::taibleson(p, n, a).unwrap(),
            Symbol::taibleson(p, n, b).unwrap(),
        );
        let two_steps = apply(&da, &apply(&db, &phi, kind).unwrap(), kind).unwrap();
        let composed = da.compose(&db).unwrap();
        assert!(
            matches!(composed.kind(), SymbolKind::Taibleson(s) if (s - (a + b)).norm() < 1e-15)
        );
        assert!(sup_rel(&two_steps, &apply(&composed, &phi, kind).unwrap()) < 1e-10);
        let back = apply(&da.inverse(), &apply(&da, &phi, kind).unwrap(), kind).unwrap();
        assert!(sup_rel(&back, &phi) < 1e-10);
        if kind == LizorkinKind::FirstKind {
            let va = Symbol::vladimirov(p, (0..n).map(|j| a + j as f64).collect()).unwrap();
            let vb = Symbol::vladimirov(p, (0..n).map(|_| b).collect()).unwrap();
            let two = apply(&va, &apply(&vb, &phi, kind).unwrap(), kind).unwrap();
            assert!(sup_rel(&two, &apply(&va.compose(&vb).unwrap(), &phi, kind).unwrap()) < 1e-10);
        }
    }
}

#[test]
fn multiplier_matches_convolution_oracle() {
    for (p, n, l, big_n) in [(2, 1, -3, 2), (3, 1, -2, 1), (2, 2, -2, 1)] {
        let phi = lizorkin(p, n, l, big_n, LizorkinKind::SecondKind, p + n as u64);
        for a in [-1.5, -0.5, 0.0, 0.5, 1.0, 2.0, -(n as f64)] {
            let alpha = c(a, 0.0);
            let fourier = apply(
                &Symbol::taibleson(p, n, alpha).unwrap(),
                &phi,
                LizorkinKind::SecondKind,
            )
            .unwrap();
            let oracle = convolution_oracle(alpha, &phi).unwrap();
            let oracle = oracle
                .regrid(fourier.grid().l, fourier.grid().big_n)
                .unwrap();
            let err = sup_rel(&fourier, &oracle);
            assert!(err < 1e-9, "p={p} n={n} alpha={a}: {err:e}");
        }
    }
}

#[test]
fn vladimirov_matches_tensor_kernel_oracle() {
    for (p, n, l, big_n) in [(2, 1, -3, 2), (3, 1, -2, 1), (2, 2, -2, 1), (3, 2, -1, 1)] {
        let phi = lizorkin(p, n, l, big_n, LizorkinKind::FirstKind, 2 * p + n as u64);
        for pair in [[-1.0, 0.5], [0.5, -1.5], [1.0, 0.0], [2.0, -1.0]] {
            let alphas: Vec<Complex64> = pair[..n].iter().map(|&a| c(a, 0.0)).collect();
            let sym = Symbol::vladimirov(p, alphas.clone()).unwrap();
            let fourier = apply(&sym, &phi, LizorkinKind::FirstKind).unwrap();
            let oracle = vladimirov_oracle(&alphas, &phi).unwrap();
            let err = sup_rel(
                &fourier,
                &oracle
                    .regrid(fourier.grid().l, fourier.grid().big_n)
                    .unwrap(),
            );
            assert!(err < 1e-9, "p={p} n={n} alphas={pair:?}: {err:e}");
        }
    }
}

#[test]
fn oracle_at_zero_order_returns_phi() {
    let phi = lizorkin(3, 1, -1, 2, LizorkinKind::SecondKind, 3);
    assert!(sup_rel(&convolution_oracle(c(0.0, 0.0), &phi).unwrap(), &phi) < 1e-12);
}

#[test]
fn outputs_stay_lizorkin() {
    for kind in [LizorkinKind::SecondKind, LizorkinKind::FirstKind] {
        let phi = lizorkin(2, 2, -2, 1, kind, 5);
        let mut symbols = vec![
            Symbol::taibleson(2, 2, c(0.7, -0.4)).unwrap(),
            Symbol::laplacian2(2, 2).unwrap(),
            Symbol::poly(
                2,
                2,
                vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
                c(1.0, 0.0),
            )
            .unwrap(),
        ];
        if kind == LizorkinKind::FirstKind {
            symbols.push(Symbol::vladimirov(2, vec![c(1.5, 0.0), c(-0.5, 0.0)]).unwrap());
            symbols.push(Symbol::laplacian1(2, 2).unwrap());
        }
        for sym in &symbols {
            let out = apply(sym, &phi, kind).unwrap();
            assert!(is_phi(&out, kind, 1e-9).holds, "{sym} on {kind}");
        }
    }
}

#[test]
fn hyperplane_singular_symbols_need_first_kind() {
    let phi = lizorkin(2, 2, -1, 1, LizorkinKind::SecondKind, 1);
    for sym in [
        Symbol::laplacian1(2, 2).unwrap(),
        Symbol::vladimirov(2, vec![c(1.0, 0.0); 2]).unwrap(),
    ] {
        assert_eq!(
            apply(&sym, &phi, LizorkinKind::SecondKind)
                .unwrap_err()
                .code(),
            "symbol"
        );
    }
}

#[test]
fn non_members_are_rejected() {
    let omega = TestFunction::omega(2, 1).unwrap();
    let err = apply(
        &Symbol::taibleson(2, 1, c(1.0, 0.0)).unwrap(),
        &omega,
        LizorkinKind::SecondKind,
    )
    .unwrap_err();
    assert_eq!(err.code(), "lizorkin-membership");
}

#[test]
fn laplacians_have_the_expected_spectra() {
    let zero = PVector::scalar(PRational::zero(2).unwrap());
    let one = PVector::scalar(PRational::from_int(2, 1).unwrap());
    let phi = TestFunction::indicator_coset(&zero, -1)
        .unwrap()
        .sub(&TestFunction::indicator_coset(&one, -1).unwrap())
        .unwrap();
    let out = apply(
        &Symbol::laplacian2(2, 1).unwrap(),
        &phi,
        LizorkinKind::SecondKind,
    )
    .unwrap();
    assert!(sup_rel(&out, &phi.scale(c(-4.0, 0.0))) < 1e-13);
}

#[test]
fn solve_round_trip_and_hypothesis() {
    let g = lizorkin(3, 1, -2, 1, LizorkinKind::SecondKind, 9);
    let sym = Symbol::poly(
        3,
        1,
        vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        c(1.0, 0.0),
    )
    .unwrap();
    let f = solve(&sym, &g, LizorkinKind::SecondKind).unwrap();
    assert!(sup_rel(&apply(&sym, &f, LizorkinKind::SecondKind).unwrap(), &g) < 1e-10);
    let d = Symbol::taibleson(3, 1, c(1.2, 0.0)).unwrap();
    let f = solve(&d, &g, LizorkinKind::SecondKind).unwrap();
    let direct = apply(
        &Symbol::taibleson(3, 1, c(-1.2, 0.0)).unwrap(),
        &g,
        LizorkinKind::SecondKind,
    )
    .unwrap();
    assert!(sup_rel(&f, &direct) < 1e-14);
    let bad = Symbol::poly(3, 1, vec![c(-1.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0)).unwrap();
    let err = solve(&bad, &g, LizorkinKind::SecondKind).unwrap_err();
    assert_eq!(err.code(), "unsolvable");
    assert!(err.to_string().contains("P(z) ≠ 0 for all z > 0"));
}

#[test]
fn vanishing_symbol_values_are_reported() {
    // P(z) = z + 1 with alpha = i·pi/ln 3 vanishes wherever 3^{alpha·k} = −1, i.e. k odd.
    let alpha = c(0.0, std::f64::consts::PI / 3f64.ln());
    let sym = Symbol::poly(3, 1, vec![c(1.0, 0.0), c(1.0, 0.0)], alpha).unwrap();
    let g = lizorkin(3, 1, -2, 1, LizorkinKind::SecondKind, 2);
    let report = apply_report(&sym, &g, LizorkinKind::SecondKind).unwrap();
    assert!(report.symbol_zeros > 0);
    assert_eq!(
        apply(&sym.inverse(), &g, LizorkinKind::SecondKind)
            .unwrap_err()
            .code(),
        "non-invertible"
    );
    let exact = Symbol::custom(3, 1, "odd-shell", |xi: &PVector| {
        if xi.norm().exponent().unwrap_or(0).rem_euclid(2) == 1 {
            c(0.0, 0.0)
        } else {
            c(1.0, 0.0)
        }
    })
    .unwrap();
    assert!(
        apply_report(&exact, &g, LizorkinKind::SecondKind)
            .unwrap()
            .symbol_zeros
            > 0
    );
    assert_eq!(
        apply(&exact.inverse(), &g, LizorkinKind::SecondKind)
            .unwrap_err()
            .code(),
        "non-invertible"
    );
}

fn residue_symbol() -> Symbol {
    // Sign-asymmetric for p = 3: the unit residue of −ξ is the other one.
    Symbol::custom(3, 1, "residue", |xi: &PVector| {
        let r = xi.coords()[0].unit_residue().unwrap_or(0);
        c(1.0, r as f64)
    })
    .unwrap()
}

#[test]
fn character_is_an_eigenfunction_with_the_transposed_symbol() {
    let phi = lizorkin(3, 1, -2, 1, LizorkinKind::SecondKind, 4);
    let sym = residue_symbol();
    let spectral = phi.grid().dual();
    for flat in [1usize, 2, 4, 5, 10] {
        let z = spectral.representative(flat);
        let lhs = apply_dist(&sym, &Distribution::character(&z), LizorkinKind::SecondKind)
            .unwrap()
            .pair(&phi)
            .unwrap();
        let minus = z.scale(&PRational::from_int(3, -1).unwrap());
        let rhs = sym.eval_point(&minus).unwrap() * phi.fourier().evaluate(&z).unwrap();
        assert!(
            (lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0),
            "z = {z}: {lhs} vs {rhs}"
        );
        assert!((sym.eval_point(&minus).unwrap() - sym.eval_point(&z).unwrap()).norm() > 0.5);
    }
}

#[test]
fn duality_uses_the_transpose() {
    let phi = lizorkin(3, 1, -2, 1, LizorkinKind::SecondKind, 6);
    let g = lizorkin(3, 1, -1, 2, LizorkinKind::SecondKind, 8);
    let sym = residue_symbol();
    let f = Distribution::regular(g.clone());
    let lhs = apply_dist(&sym, &f, LizorkinKind::SecondKind)
        .unwrap()
        .pair(&phi)
        .unwrap();
    let rhs = f
        .pair(&apply(&sym.transpose(), &phi, LizorkinKind::SecondKind).unwrap())
        .unwrap();
    assert!((lhs - rhs).norm() < 1e-12);
    let wrong = f
        .pair(&apply(&sym, &phi, LizorkinKind::SecondKind).unwrap())
        .unwrap();
    assert!((lhs - wrong).norm() > 1e-6);
}

#[test]
fn fractional_integral_of_delta() {
    let phi = lizorkin(2, 2, -2, 1, LizorkinKind::SecondKind, 10);
    for a in [0.5, 1.3] {
        let alpha = c(a, 0.0);
        let d = Distribution::delta(2, 2).unwrap();
        let lhs = apply_dist(
            &Symbol::taibleson(2, 2, -alpha).unwrap(),
            &d,
            LizorkinKind::SecondKind,
        )
        .unwrap()
        .pair(&phi)
        .unwrap();
        let g = gamma_p_n(2, 2, alpha).value().unwrap();
        let riesz = CatalogEntry::new(2, 2, EntryKind::AbsAlphaMinusN(alpha))
            .unwrap()
            .distribution();
        let rhs = riesz.pair(&phi).unwrap() / g;
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0));
    }
}

#[test]
fn custom_constancy_is_checked_by_sampling() {
    let grid = Grid::new(3, 1, -1, 2).unwrap();
    let good = residue_symbol();
    assert!(good
        .verify_constancy(&grid, LizorkinKind::SecondKind)
        .is_ok());
    let bad = Symbol::custom(3, 1, "fractional", |xi: &PVector| {
        c(xi.coords()[0].to_f64(), 0.0)
    })
    .unwrap();
    assert_eq!(
        bad.verify_constancy(&grid, LizorkinKind::SecondKind)
            .unwrap_err()
            .code(),
        "symbol"
    );
}
