use l2torsion::freegroup::{compose, fox_derivative, fox_jacobian, Word};
use l2torsion::groupring::GroupRingElt;
use l2torsion::selftest::gen;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cancels adjacent inverse pairs in a random order until none remain.
fn reduce_randomly(mut letters: Vec<(usize, i8)>, r: &mut ChaCha8Rng) -> Vec<(usize, i8)> {
    loop {
        let spots: Vec<usize> = (0..letters.len().saturating_sub(1)).filter(|&i| letters[i].0 == letters[i + 1].0 && letters[i].1 == -letters[i + 1].1).collect();
        if spots.is_empty() {
            return letters;
        }
        let i = spots[r.gen_range(0..spots.len())];
        letters.drain(i..i + 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn product_rule(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let u = gen::word(&mut r, rank, 8);
        let v = gen::word(&mut r, rank, 8);
        let uv = u.multiply(&v).unwrap();
        for j in 1..=rank {
            let rhs = fox_derivative(&u, j).unwrap().add(&GroupRingElt::from_word(u.clone()).mul(&fox_derivative(&v, j).unwrap()));
            prop_assert_eq!(fox_derivative(&uv, j).unwrap(), rhs);
        }
    }

    #[test]
    fn matches_letterwise_rule(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let letters = gen::letters(&mut r, rank, 12);
        let w = Word::reduce(rank, &letters).unwrap();
        for j in 1..=rank {
            prop_assert_eq!(fox_derivative(&w, j).unwrap(), gen::naive_fox(rank, &letters, j));
        }
    }

    #[test]
    fn reduction_is_confluent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=2);
        let letters = gen::letters(&mut r, rank, 14);
        let a = reduce_randomly(letters.clone(), &mut r);
        let b = reduce_randomly(letters.clone(), &mut r);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(Word::reduce(rank, &a).unwrap(), Word::reduce(rank, &letters).unwrap());
        prop_assert_eq!(Word::reduce(rank, &a).unwrap().len(), a.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fundamental_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let w = gen::word(&mut r, rank, 10);
        let mut sum = GroupRingElt::zero(rank);
        for j in 1..=rank {
            let y = GroupRingElt::from_word(Word::generator(rank, j).unwrap()).sub(&GroupRingElt::one(rank));
            sum = sum.add(&fox_derivative(&w, j).unwrap().mul(&y));
        }
        prop_assert_eq!(sum, GroupRingElt::from_word(w).sub(&GroupRingElt::one(rank)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn chain_rule(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (r.gen_range(1..=3), r.gen_range(1..=3), r.gen_range(1..=3));
        let phi = gen::hom(&mut r, a, b, 4);
        let psi = gen::hom(&mut r, b, c, 4);
        let lhs = fox_jacobian(&compose(&psi, &phi).unwrap());
        let rhs = fox_jacobian(&phi).try_map(c, |e| psi.apply_elt(e)).unwrap().mul(&fox_jacobian(&psi)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
