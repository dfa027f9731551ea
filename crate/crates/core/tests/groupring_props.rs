use l2torsion::groupring::LaurentFraction;
use l2torsion::selftest::gen;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero_rational(r: &mut ChaCha8Rng) -> BigRational {
    let mut n = r.gen_range(-5..=5);
    if n == 0 {
        n = 1;
    }
    BigRational::new(BigInt::from(n), BigInt::from(r.gen_range(1..=4)))
}

fn fraction(r: &mut ChaCha8Rng, dim: usize) -> LaurentFraction {
    loop {
        let den = gen::laurent(r, dim, 3, 2);
        if !den.is_zero() {
            return LaurentFraction::new(gen::laurent(r, dim, 3, 2), den).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn no_zero_divisors(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let a = gen::nonzero_element(&mut r, rank, 4, 5);
        let b = gen::nonzero_element(&mut r, rank, 4, 5);
        prop_assert!(!a.mul(&b).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn abelianize_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let a = gen::element(&mut r, rank, 4, 5);
        let b = gen::element(&mut r, rank, 4, 5);
        prop_assert_eq!(a.mul(&b).abelianize(), a.abelianize().mul(&b.abelianize()));
        prop_assert_eq!(a.add(&b).abelianize(), a.abelianize().add(&b.abelianize()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn involution_commutes_with_abelianization(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let a = gen::element(&mut r, rank, 4, 5);
        let inverted: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
        prop_assert_eq!(a.involute().abelianize(), a.abelianize().substitute(&inverted, rank));
        prop_assert_eq!(a.involute().involute(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn fractions_match_rational_evaluation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.gen_range(1..=2);
        let f = fraction(&mut r, dim);
        let g = fraction(&mut r, dim);
        let p: Vec<BigRational> = (0..dim).map(|_| nonzero_rational(&mut r)).collect();
        let (Some(fv), Some(gv)) = (f.eval(&p), g.eval(&p)) else { return Ok(()) };
        let ok = |h: &LaurentFraction, want: BigRational| h.eval(&p).is_none_or(|v| v == want);
        prop_assert!(ok(&f.add(&g), &fv + &gv));
        prop_assert!(ok(&f.sub(&g), &fv - &gv));
        prop_assert!(ok(&f.mul(&g), &fv * &gv));
        if !g.is_zero() && !gv.is_zero() {
            prop_assert!(ok(&f.div(&g).unwrap(), &fv / &gv));
        }
    }
}
