use l2torsion::leading::leading_elt;
use l2torsion::polytope::{face, hull, minkowski, poly_of_elt, wh_normalize, IntPolytope, PolytopeDiff};
use l2torsion::selftest::gen;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn polytope(r: &mut ChaCha8Rng, dim: usize) -> IntPolytope {
    let n = r.gen_range(1..=6);
    let pts: Vec<Vec<i64>> = (0..n).map(|_| (0..dim).map(|_| r.gen_range(-3..=3)).collect()).collect();
    hull(dim, &pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn faces_of_sums(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.gen_range(1..=3);
        let p = polytope(&mut r, dim);
        let q = polytope(&mut r, dim);
        let phi = gen::character(&mut r, dim);
        let lhs = face(&phi, &minkowski(&p, &q).unwrap()).unwrap();
        let rhs = minkowski(&face(&phi, &p).unwrap(), &face(&phi, &q).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polytope_of_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let a = gen::nonzero_element(&mut r, rank, 4, 4);
        let b = gen::nonzero_element(&mut r, rank, 4, 4);
        let lhs = poly_of_elt(&a.mul(&b)).unwrap();
        prop_assert_eq!(lhs, minkowski(&poly_of_elt(&a).unwrap(), &poly_of_elt(&b).unwrap()).unwrap());
    }

    #[test]
    fn leading_term_is_face(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let a = gen::nonzero_element(&mut r, rank, 5, 4);
        let phi = gen::character(&mut r, rank);
        let lhs = poly_of_elt(&leading_elt(&phi, &a).unwrap()).unwrap();
        prop_assert_eq!(lhs, face(&phi, &poly_of_elt(&a).unwrap()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalization_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.gen_range(1..=3);
        let d1 = PolytopeDiff::new(polytope(&mut r, dim), polytope(&mut r, dim)).unwrap();
        let d2 = PolytopeDiff::new(polytope(&mut r, dim), polytope(&mut r, dim)).unwrap();
        let lhs = wh_normalize(&wh_normalize(&d1).diff().add(wh_normalize(&d2).diff()).unwrap());
        prop_assert!(lhs == wh_normalize(&d1.add(&d2).unwrap()));
    }
}
