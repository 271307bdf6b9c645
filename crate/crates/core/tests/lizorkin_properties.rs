use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padic_core::lizorkin::{is_phi, is_psi, project, random_phi};
use padic_core::schwartz::random;
use padic_core::{Grid, LizorkinKind, PRational, TestFunction};

fn kind() -> impl Strategy<Value = LizorkinKind> {
    prop_oneof![
        Just(LizorkinKind::FirstKind),
        Just(LizorkinKind::SecondKind)
    ]
}

fn grid() -> impl Strategy<Value = Grid> {
    (
        prop_oneof![Just(2u64), Just(3)],
        1usize..=2,
        -2i64..1,
        1i64..3,
    )
        .prop_map(|(p, n, l, d)| Grid::new(p, n, l, l + d).unwrap())
}

/// Half Lizorkin by construction, half unconstrained.
fn function(g: Grid, kind: LizorkinKind, seed: u64) -> TestFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if seed % 2 == 0 {
        random_phi(g, kind, 5, &mut rng).unwrap()
    } else {
        random::integer(g, 5, &mut rng)
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn membership_is_dual_to_spectral_vanishing(g in grid(), k in kind(), seed: u64) {
        let phi = function(g, k, seed);
        let member = is_phi(&phi, k, 0.0).holds;
        if seed % 2 == 0 {
            prop_assert!(member);
        }
        prop_assert_eq!(member, is_psi(&phi.inverse_fourier(), k, 0.0));
        prop_assert_eq!(member, is_psi(&phi.fourier(), k, 0.0));
    }

    #[test]
    fn projection_lands_in_the_space(g in grid(), k in kind(), seed: u64, s in 0i64..4) {
        let phi = random::integer(g, 5, &mut ChaCha8Rng::seed_from_u64(seed));
        let t = PRational::p_power(g.p, -s).unwrap();
        let projected = project(&phi, k, &t).unwrap();
        prop_assert!(is_phi(&projected.function, k, 0.0).holds);
    }

    #[test]
    fn projection_distances_decrease_to_zero(g in grid(), seed: u64) {
        let k = LizorkinKind::SecondKind;
        let phi = random_phi(g, k, 5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut last = f64::INFINITY;
        for s in 0..=(g.big_n + 1).max(1) {
            let d = project(&phi, k, &PRational::p_power(g.p, -s).unwrap()).unwrap().distance;
            prop_assert!(d <= last + 1e-12);
            last = d;
        }
        // Once |t| ≥ p^N the killed ball lies inside the zero cell of the
        // spectrum, where a zero-mean function already vanishes.
        let d = project(&phi, k, &PRational::p_power(g.p, -g.big_n).unwrap()).unwrap().distance;
        prop_assert!(d <= 1e-12 * phi.l2_norm().max(1.0));
    }
}
