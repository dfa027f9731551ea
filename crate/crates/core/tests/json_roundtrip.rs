use l2torsion::complex::{torsion, torsion_of_hom};
use l2torsion::groupring::{GRMatrix, GroupRingElt, LaurentFraction, LaurentPoly};
use l2torsion::json::*;
use l2torsion::oracle::Budget;
use l2torsion::polytope::{poly_of_elt, PolytopeDiff};
use l2torsion::selftest::gen;
use l2torsion::stallings::build_core;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Serializes to text and back.
fn through_text(v: &Value) -> Value {
    parse_document(&serde_json::to_string(v).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        match seed % 11 {
            0 => {
                let w = gen::word(&mut r, rank, 8);
                prop_assert_eq!(word_from_json(rank, &through_text(&word_to_json(&w)), None).unwrap(), w);
            }
            1 => {
                let a = gen::element(&mut r, rank, 5, 6);
                prop_assert_eq!(<GroupRingElt as JsonRing>::from_json(rank, &through_text(&a.to_json())).unwrap(), a.clone());
                // the string form parses back too
                prop_assert_eq!(elt_from_json(rank, &Value::String(a.to_string()), None).unwrap(), a);
            }
            2 => {
                let p = gen::laurent(&mut r, rank, 5, 3);
                prop_assert_eq!(<LaurentPoly as JsonRing>::from_json(rank, &through_text(&p.to_json())).unwrap(), p);
            }
            3 => {
                let (rows, cols) = (r.gen_range(0..=3), r.gen_range(0..=3));
                let entries = (0..rows * cols).map(|_| gen::element(&mut r, rank, 3, 3)).collect();
                let m = GRMatrix::from_entries(rows, cols, rank, entries).unwrap();
                prop_assert_eq!(matrix_from_json::<GroupRingElt>(rank, rows, cols, &through_text(&matrix_to_json(&m))).unwrap(), m);
            }
            4 => {
                let k = gen::known_complex(&mut r, rank, true);
                let back: l2torsion::complex::BasedComplex<LaurentPoly> = complex_from_json(&through_text(&complex_to_json(&k.complex))).unwrap();
                prop_assert_eq!(back, k.complex);
            }
            5 => {
                let phi = gen::character(&mut r, rank);
                prop_assert_eq!(character_from_json(&through_text(&character_to_json(&phi))).unwrap(), phi);
            }
            6 => {
                let p = poly_of_elt(&gen::nonzero_element(&mut r, rank, 5, 4)).unwrap();
                let q = poly_of_elt(&gen::nonzero_element(&mut r, rank, 5, 4)).unwrap();
                prop_assert_eq!(polytope_from_json(&through_text(&polytope_to_json(&p))).unwrap(), p.clone());
                let d = PolytopeDiff::new(p, q).unwrap();
                let back = polytope_diff_from_json(&through_text(&polytope_diff_to_json(&d))).unwrap();
                prop_assert_eq!(polytope_diff_to_json(&back), polytope_diff_to_json(&d));
            }
            7 => {
                let num = gen::laurent(&mut r, rank, 4, 2);
                let den = loop {
                    let p = gen::laurent(&mut r, rank, 3, 2);
                    if !p.is_zero() {
                        break p;
                    }
                };
                let f = LaurentFraction::new(num, den).unwrap();
                let back = fraction_from_json(rank, &through_text(&fraction_to_json(&f))).unwrap();
                prop_assert!(back.value_eq(&f));
                prop_assert_eq!(fraction_to_json(&back), fraction_to_json(&f));
            }
            8 => {
                let codomain = r.gen_range(1..=3);
                let phi = gen::hom(&mut r, rank, codomain, 5);
                prop_assert_eq!(hom_from_json(&through_text(&hom_to_json(&phi))).unwrap(), phi);
            }
            9 => {
                let words: Vec<_> = (0..r.gen_range(1..=4)).map(|_| gen::word(&mut r, rank, 6)).collect();
                let g = build_core(&words, rank).unwrap();
                let back = core_from_json(&through_text(&core_to_json(&g))).unwrap();
                prop_assert_eq!(core_to_json(&back), core_to_json(&g));
            }
            _ => {
                if r.gen_bool(0.5) {
                    let phi = gen::hom(&mut r, rank, rank, 3);
                    if let Ok(tau) = torsion_of_hom(&phi, &Budget::default()) {
                        let v = torsion_to_json(rank, &tau);
                        let back = torsion_from_json::<GroupRingElt>(&through_text(&v)).unwrap();
                        prop_assert_eq!(torsion_to_json(rank, &back), v);
                    }
                } else {
                    let k = gen::known_complex(&mut r, rank, true);
                    let tau = torsion(&k.complex, &Budget::default()).unwrap();
                    let v = torsion_to_json(rank, &tau);
                    let back = torsion_from_json::<LaurentPoly>(&through_text(&v)).unwrap();
                    prop_assert_eq!(torsion_to_json(rank, &back), v);
                }
            }
        }
    }
}
