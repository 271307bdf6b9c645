//! Exact p-adic numbers, norms, fractional parts and characters.

mod character;
mod rational;

pub use character::{
    chi, eval_character, index_table, norm_pow, ppow, primitive_root, root_of_unity, CharacterKind,
    MultCharacter, NormedCharacter,
};
pub(crate) use rational::check_prime;
pub use rational::{is_prime, PNorm, PRational, PVector};

pub use crate::grid::enumerate_cosets;

/// Max norm of a vector.
pub fn norm(x: &PVector) -> PNorm {
    x.norm()
}

/// Fractional part `{x}ₚ`.
pub fn frac_part(x: &PRational) -> num_rational::BigRational {
    x.frac_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use num_bigint::BigInt;
    use num_complex::Complex64;
    use num_rational::BigRational;

    fn q(p: u64, num: i64, den: i64) -> PRational {
        PRational::from_ratio(p, num, den).unwrap()
    }

    fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn norms() {
        assert_eq!(q(3, 12, 1).norm(), PNorm::Pow(-1));
        assert_eq!(q(3, 0, 1).norm(), PNorm::Zero);
        assert_eq!(q(3, 12, 1).norm().to_f64(3), 1.0 / 3.0);
        let v = PVector::new(vec![q(2, 1, 2), q(2, 3, 1)]).unwrap();
        assert_eq!(norm(&v), PNorm::Pow(1));
    }

    #[test]
    fn fractional_parts() {
        assert_eq!(frac_part(&q(2, 3, 4)), ratio(3, 4));
        assert_eq!(frac_part(&q(2, 1, 3)), ratio(0, 1));
        assert_eq!(frac_part(&q(3, 1, 3)), ratio(1, 3));
        assert_eq!(frac_part(&q(2, -1, 2)), ratio(1, 2));
        assert_eq!(frac_part(&q(5, 7, 1)), ratio(0, 1));
        // 1/6 in ℚ₂: 1/6 = (1/2)(1/3) and 1/3 ≡ 1 mod 2, so {1/6}₂ = 1/2.
        assert_eq!(frac_part(&q(2, 1, 6)), ratio(1, 2));
    }

    #[test]
    fn additive_character() {
        assert_eq!(chi(&q(2, 1, 2)), Complex64::new(-1.0, 0.0));
        assert_eq!(chi(&q(5, 17, 1)), Complex64::new(1.0, 0.0));
        let w = chi(&q(3, 1, 3));
        let expected = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert!((w - expected).norm() < 1e-15);
    }

    #[test]
    fn text_form() {
        let x = PRational::parse("3/2^2", 2).unwrap();
        assert_eq!(x, q(2, 3, 4));
        assert_eq!(x.to_string(), "3/2^2");
        assert_eq!(PRational::parse("-12", 3).unwrap().to_string(), "-12");
        assert_eq!(PRational::parse("1/3", 2).unwrap().to_string(), "1/3");
        assert!(PRational::parse("1/3^2", 2).is_err());
        assert!(PRational::parse("abc", 2).is_err());
        assert_eq!(q(2, 12, 8).to_parts(), Some((BigInt::from(3), 1)));
    }

    #[test]
    fn residues_and_units() {
        assert_eq!(q(2, 1, 3).residue(3), Some(3)); // 3·3 = 9 ≡ 1 mod 8
        assert_eq!(q(5, 7, 1).residue(1), Some(2));
        assert_eq!(q(5, 1, 5).residue(1), None);
        assert_eq!(q(3, 18, 1).unit_residue(), Some(2));
        assert_eq!(q(3, 5, 9).unit_residue(), Some(2));
    }

    #[test]
    fn cosets() {
        let g = Grid::new(2, 1, 0, 1).unwrap();
        let reps: Vec<String> = enumerate_cosets(&g).iter().map(|v| v.to_string()).collect();
        assert_eq!(reps, vec!["0", "1/2^1"]);
        assert_eq!(enumerate_cosets(&Grid::new(3, 1, 0, 0).unwrap()).len(), 1);
        let g2 = Grid::new(2, 2, -1, 0).unwrap();
        let reps: Vec<String> = enumerate_cosets(&g2)
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert_eq!(reps, vec!["(0, 0)", "(0, 1)", "(1, 0)", "(1, 1)"]);
        assert!(Grid::new(2, 1, 1, 0).is_err());
    }

    #[test]
    fn coset_cover_and_distinctness() {
        let g = Grid::new(3, 1, -1, 1).unwrap();
        let reps = enumerate_cosets(&g);
        for (i, r) in reps.iter().enumerate() {
            assert_eq!(g.locate(r).unwrap(), Some(i));
            for s in &reps[..i] {
                // non-congruent mod B_l
                let d = &r.coords()[0] - &s.coords()[0];
                assert!(d.norm() > PNorm::Pow(g.l));
            }
        }
        // every element of B_N with denominator up to p^N lands in some coset
        for k in -20..20 {
            let x = PVector::scalar(q(3, k, 3));
            assert!(g.locate(&x).unwrap().is_some());
        }
        assert_eq!(g.locate(&PVector::scalar(q(3, 1, 9))).unwrap(), None);
    }

    #[test]
    fn multiplicative_characters() {
        let pi = MultCharacter::power(3, Complex64::new(2.0, 0.0));
        assert!((pi.eval(&q(3, 1, 3)).unwrap() - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        assert!(pi.eval(&q(3, 0, 1)).is_err());

        assert_eq!(primitive_root(5), 2);
        let tame = NormedCharacter::tame(5, 1).unwrap();
        assert_eq!(tame.eval(&q(5, 2, 1)).unwrap(), Complex64::new(0.0, 1.0));

        let alpha = Complex64::new(0.3, -1.1);
        let pa = MultCharacter::new(alpha, tame);
        let at_p = pa.eval(&q(5, 5, 1)).unwrap();
        assert!((at_p - ppow(5, 1.0 - alpha)).norm() < 1e-14);
        assert_eq!(tame.eval(&q(5, 5, 1)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn primitive_roots_are_smallest() {
        for (p, g) in [
            (2, 1),
            (3, 2),
            (5, 2),
            (7, 3),
            (11, 2),
            (13, 2),
            (17, 3),
            (23, 5),
        ] {
            assert_eq!(primitive_root(p), g, "p = {p}");
        }
    }

    #[test]
    fn character_composition() {
        let a = NormedCharacter::tame(7, 2).unwrap();
        let b = NormedCharacter::tame(7, 5).unwrap();
        assert_eq!(a.compose(&b).index(), 1);
        assert!(a.compose(&a.inverse()).is_trivial());
        assert!(NormedCharacter::tame(2, 1).is_err());
        assert!(NormedCharacter::tame(7, 6).is_err());
    }
}
