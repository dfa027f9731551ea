use l2torsion::catalog;
use l2torsion::fkdet::{chainlink_closed_form, estimate_fk};
use l2torsion::selftest::gen;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const FLOAT_SLACK: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gen::nonzero_element(&mut r, 2, 3, 3);
        let b = gen::nonzero_element(&mut r, 2, 3, 3);
        let s = r.gen();
        let (ea, eb, eab) = (estimate_fk(&a, 256, 8, s).unwrap(), estimate_fk(&b, 256, 8, s).unwrap(), estimate_fk(&a.mul(&b), 256, 8, s).unwrap());
        let prod = ea.estimate * eb.estimate;
        let err = (eab.stderr.powi(2) + (eb.estimate * ea.stderr).powi(2) + (ea.estimate * eb.stderr).powi(2)).sqrt();
        prop_assert!((eab.estimate - prod).abs() <= 3.0 * err + FLOAT_SLACK * prod, "{} vs {} (err {})", eab.estimate, prod, err);
    }

    #[test]
    fn involution_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gen::nonzero_element(&mut r, 2, 3, 3);
        let s = r.gen();
        let (e, f) = (estimate_fk(&a, 128, 4, s).unwrap(), estimate_fk(&a.involute(), 128, 4, s).unwrap());
        prop_assert!((e.estimate - f.estimate).abs() <= FLOAT_SLACK * e.estimate.max(1.0));
    }

    #[test]
    fn trivial_units_are_invisible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = gen::nonzero_element(&mut r, 2, 3, 3);
        let u = gen::trivial_unit(&mut r, 2, 3);
        let s = r.gen();
        let (e, f) = (estimate_fk(&a, 128, 4, s).unwrap(), estimate_fk(&u.mul(&a), 128, 4, s).unwrap());
        prop_assert!((e.estimate - f.estimate).abs() <= FLOAT_SLACK * e.estimate.max(1.0));
    }
}

#[test]
fn error_shrinks_with_size() {
    let a = catalog::chainlink_element(3).unwrap();
    let target = chainlink_closed_form(3);
    let median_error = |n: usize| {
        let mut errs: Vec<f64> = (0..5).map(|s| (estimate_fk(&a, n, 8, s).unwrap().estimate - target).abs()).collect();
        errs.sort_by(f64::total_cmp);
        errs[2]
    };
    let errs: Vec<f64> = [128, 256, 512].into_iter().map(median_error).collect();
    assert!(errs[2] <= errs[0], "median errors {errs:?}");
    assert!(errs[2] / target < 0.02, "median errors {errs:?}");
}
