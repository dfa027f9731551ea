//! Worked examples: the n-chain link Seifert-surface complement, a genus-2
//! sutured handlebody, the trefoil presentation, circle and torus.

use num_bigint::BigInt;

use crate::complex::BasedComplex;
use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, FreeHom, Word};
use crate::groupring::{GRMatrix, GroupRingElt, LaurentPoly, Matrix};

/// `u_i ↦ x_i x_{i+1}^{-1}` for `i ≤ n−2` and
/// `u_{n−1} ↦ x_{n−1}^2 x_{n−2} ⋯ x_1`, between free groups of rank `n − 1`.
pub fn chainlink_hom(n: usize) -> Result<FreeHom> {
    if n < 3 {
        return Err(Error::Schema(format!("chain links need n >= 3, got {n}")));
    }
    let r = n - 1;
    let mut images = Vec::with_capacity(r);
    for i in 1..r {
        images.push(Word::from_syllables(r, &[(i, 1), (i + 1, -1)])?);
    }
    let mut last = vec![(r, 2)];
    last.extend((1..r).rev().map(|i| (i, 1)));
    images.push(Word::from_syllables(r, &last)?);
    FreeHom::new(r, r, images)
}

/// `y_i = x_{n−1} x_{n−2} ⋯ x_i`.
pub fn chainlink_y(n: usize, i: usize) -> Result<Word> {
    let r = n - 1;
    let s: Vec<(usize, i64)> = (i..=r).rev().map(|j| (j, 1)).collect();
    Word::from_syllables(r, &s)
}

/// `1 + y_1 + ⋯ + y_{n−1}`.
pub fn chainlink_element(n: usize) -> Result<GroupRingElt> {
    let r = n - 1;
    let mut a = GroupRingElt::one(r);
    for i in 1..=r {
        a = a.add(&GroupRingElt::from_word(chainlink_y(n, i)?));
    }
    Ok(a)
}

/// Rows of the map `H_1` in `x`-coordinates to `y`-coordinates:
/// `[x_i] = [y_i] − [y_{i+1}]`.
pub fn chainlink_y_coordinates(n: usize) -> Vec<Vec<i64>> {
    let r = n - 1;
    (0..r).map(|row| (0..r).map(|col| if col == row { 1 } else if col + 1 == row { -1 } else { 0 }).collect()).collect()
}

/// `x ↦ x`, `u ↦ y x y x^{-1} y^{-1}` from `⟨x, u⟩` to `⟨x, y⟩`.
pub fn genus2_hom() -> FreeHom {
    FreeHom::parse(2, 2, &["x", "yxyXY"], &Alphabet::new("xy").expect("valid")).expect("valid words")
}

/// `1 + yx − u` with `u = y x y x^{-1} y^{-1}`, over `⟨x, y⟩`.
pub fn genus2_element() -> GroupRingElt {
    let a = Alphabet::new("xy").expect("valid");
    let w = |s: &str| GroupRingElt::from_word(Word::parse_with(2, s, &a).expect("valid"));
    GroupRingElt::one(2).add(&w("yx")).sub(&w("yxyXY"))
}

/// `⟨a, b | a b a b^{-1} a^{-1} b^{-1}⟩`.
pub fn trefoil() -> (usize, Vec<Word>) {
    (2, vec![Word::parse_with(2, "abaBAB", &Alphabet::default()).expect("valid")])
}

pub fn circle_complex() -> BasedComplex<GroupRingElt> {
    let a = GroupRingElt::parse(1, "x1 - 1").expect("valid");
    BasedComplex::new(1, vec![1, 1], vec![GRMatrix::from_entries(1, 1, 1, vec![a]).expect("1x1")]).expect("shapes")
}

/// Cellular chains of the torus: `(1 − t_2, t_1 − 1)` then `(t_1 − 1; t_2 − 1)`.
pub fn torus_complex() -> BasedComplex<LaurentPoly> {
    let lp = |terms: &[(&[i64], i64)]| LaurentPoly::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))));
    let a2 = Matrix::from_entries(1, 2, 2, vec![lp(&[(&[0, 0], 1), (&[0, 1], -1)]), lp(&[(&[1, 0], 1), (&[0, 0], -1)])]).expect("1x2");
    let a1 = Matrix::from_entries(2, 1, 2, vec![lp(&[(&[1, 0], 1), (&[0, 0], -1)]), lp(&[(&[0, 1], 1), (&[0, 0], -1)])]).expect("2x1");
    BasedComplex::new(2, vec![1, 2, 1], vec![a2, a1]).expect("shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{torsion_of_hom, unit_pivot_reduce, wh_element_equal};
    use crate::freegroup::fox_jacobian;
    use crate::oracle::Budget;
    use crate::polytope::IntPolytope;
    use crate::stallings::decide_weak_iso;

    #[test]
    fn chainlink_three() {
        let phi = chainlink_hom(3).unwrap();
        assert_eq!(phi.images()[0], Word::parse(2, "x1 x2^-1").unwrap());
        assert_eq!(phi.images()[1], Word::parse(2, "x2^2 x1").unwrap());
        assert!(chainlink_hom(2).is_err());
    }

    #[test]
    fn chainlink_reduction_is_conjugate_of_sum() {
        for n in 3..=6 {
            let j = fox_jacobian(&chainlink_hom(n).unwrap());
            let (e, s) = unit_pivot_reduce(&j).unwrap().unwrap();
            let x = Word::generator(n - 1, n - 1).unwrap();
            let expected = chainlink_element(n).unwrap().left_mul_word(&x).right_mul_word(&x.inverse());
            assert_eq!((e, s), (expected, 1), "n = {n}");
        }
    }

    #[test]
    fn chainlink_torsion() {
        for n in 3..=8 {
            let phi = chainlink_hom(n).unwrap();
            assert!(decide_weak_iso(&phi).unwrap());
            let tau = torsion_of_hom(&phi, &Budget::default()).unwrap();
            let rep = tau.element_rep().unwrap().as_element().unwrap();
            assert!(wh_element_equal(&rep, &chainlink_element(n).unwrap()).unwrap());
            let p = tau.polytope().unwrap().plus().linear_image(&chainlink_y_coordinates(n)).unwrap();
            assert_eq!(p, IntPolytope::standard_simplex(n - 1));
        }
    }

    #[test]
    fn genus2() {
        let j = fox_jacobian(&genus2_hom());
        let a = Alphabet::new("xy").unwrap();
        let e = |s: &str| GroupRingElt::from_word(Word::parse_with(2, s, &a).unwrap());
        assert_eq!(*j.get(0, 0), GroupRingElt::one(2));
        assert!(j.get(0, 1).is_zero());
        assert_eq!(*j.get(1, 0), e("y").sub(&e("yxyX")));
        assert_eq!(*j.get(1, 1), genus2_element());
        let tau = torsion_of_hom(&genus2_hom(), &Budget::default()).unwrap();
        assert_eq!(tau.element_rep().unwrap().as_element().unwrap(), genus2_element());
        let hull = crate::polytope::hull(2, &[vec![0, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(*tau.polytope().unwrap().plus(), hull);
    }
}
