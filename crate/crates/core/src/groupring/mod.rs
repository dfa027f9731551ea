//! Integral group rings of free groups, matrices over them, and the
//! abelianization to multivariate Laurent polynomials.

mod det;
mod laurent;
mod matrix;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Word};

pub use det::{laurent_det, laurent_det_bareiss, laurent_det_expansion};
pub use laurent::{LaurentFraction, LaurentPoly};
pub use matrix::{GRMatrix, LaurentMatrix, Matrix};

/// Coefficient rings the chain-complex machinery runs over: integral group
/// rings of free groups and of free abelian groups.
///
/// Every term of an element sits over a group element whose homology class
/// (an integer vector) is available through [`RingElement::term_classes`].
pub trait RingElement: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Whether the underlying group is abelian.
    const COMMUTATIVE: bool;

    fn zero(rank: usize) -> Self;
    fn one(rank: usize) -> Self;
    fn from_int(rank: usize, c: i64) -> Self;
    fn rank(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn involute(&self) -> Self;
    fn abelianize(&self) -> LaurentPoly;
    /// The inverse of a trivial unit `±g`, `None` for anything else.
    fn unit_inverse(&self) -> Option<Self>;
    fn term_count(&self) -> usize;
    /// Homology classes of the support, one entry per stored term.
    fn term_classes(&self) -> Vec<Vec<i64>>;
    /// Class and coefficient of every stored term.
    fn class_terms(&self) -> Vec<(Vec<i64>, BigInt)>;
    /// Keeps exactly the terms whose class satisfies `keep`.
    fn retain_by_class<F: Fn(&[i64]) -> bool>(&self, keep: F) -> Self;
    /// Terms as `(syllables, coefficient)` with one-indexed generators.
    fn syllable_terms(&self) -> Vec<(Vec<(usize, i64)>, BigInt)>;
    /// A trivial unit `u` with `self = u·other`, if one exists.
    fn left_unit_quotient(&self, other: &Self) -> Option<Self>;
}

/// An element of `Z F_rank`: a finite map from reduced words to nonzero
/// integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    rank: usize,
    terms: BTreeMap<Word, BigInt>,
}

fn accumulate(map: &mut BTreeMap<Word, BigInt>, w: Word, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl GroupRingElt {
    pub fn zero(rank: usize) -> Self {
        GroupRingElt { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(1, Word::identity(rank))
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(rank, vec![(Word::identity(rank), c.into())])
    }

    pub fn monomial(c: impl Into<BigInt>, w: Word) -> Self {
        let rank = w.rank();
        Self::from_terms(rank, vec![(w, c.into())])
    }

    pub fn from_word(w: Word) -> Self {
        Self::monomial(1, w)
    }

    /// Collects terms, merging equal words and dropping zeros.
    ///
    /// Panics if a word has a rank other than `rank`.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Word, BigInt)>) -> Self {
        let mut map = BTreeMap::new();
        for (w, c) in terms {
            assert_eq!(w.rank(), rank, "word rank differs from element rank");
            accumulate(&mut map, w, c);
        }
        GroupRingElt { rank, terms: map }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ShortLex order of their words.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "rank mismatch in group ring addition");
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            accumulate(&mut terms, w.clone(), c.clone());
        }
        GroupRingElt { rank: self.rank, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GroupRingElt { rank: self.rank, terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    /// Convolution `Σ a_u b_v · uv`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "rank mismatch in group ring multiplication");
        let mut terms = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                accumulate(&mut terms, u.mul_unchecked(v), a * b);
            }
        }
        GroupRingElt { rank: self.rank, terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        GroupRingElt { rank: self.rank, terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    pub fn left_mul_word(&self, g: &Word) -> Self {
        Self::from_terms(self.rank, self.terms.iter().map(|(w, c)| (g.mul_unchecked(w), c.clone())))
    }

    pub fn right_mul_word(&self, g: &Word) -> Self {
        Self::from_terms(self.rank, self.terms.iter().map(|(w, c)| (w.mul_unchecked(g), c.clone())))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.rank);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `Σ n_g g ↦ Σ n_g g^{-1}`.
    pub fn involute(&self) -> Self {
        Self::from_terms(self.rank, self.terms.iter().map(|(w, c)| (w.inverse(), c.clone())))
    }

    /// Image in `Z[Z^rank]`: each word goes to its exponent-sum monomial.
    pub fn abelianize(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.rank, self.terms.iter().map(|(w, c)| (w.exponent_sums(), c.clone())))
    }

    /// `Some((s, w))` iff the element is exactly `s·w` with `s = ±1`.
    pub fn is_trivial_unit(&self) -> Option<(i8, Word)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (w, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((1, w.clone()))
        } else if (-c).is_one() {
            Some((-1, w.clone()))
        } else {
            None
        }
    }

    /// Re-embeds the element into a free group ring of larger (or equal) rank.
    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (w, c) in &self.terms {
            terms.push((w.with_rank(rank)?, c.clone()));
        }
        Ok(Self::from_terms(rank, terms))
    }

    pub fn parse(rank: usize, s: &str) -> Result<Self> {
        Self::parse_with(rank, s, &Alphabet::default())
    }

    /// Parses sums like `1 + x1 - 2 x1 x2^-1` or `y - yxyX`. A leading
    /// integer token in a term is its coefficient.
    pub fn parse_with(rank: usize, s: &str, alphabet: &Alphabet) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty group ring expression".into()));
        }
        let mut pieces: Vec<(i64, String)> = Vec::new();
        let mut sign = 1i64;
        let mut cur = String::new();
        let mut prev_nonspace: Option<char> = None;
        for ch in s.chars() {
            let is_sep = (ch == '+' || ch == '-') && prev_nonspace != Some('^') && prev_nonspace != Some('(');
            if is_sep {
                if !cur.trim().is_empty() {
                    pieces.push((sign, std::mem::take(&mut cur)));
                    sign = 1;
                }
                cur.clear();
                if ch == '-' {
                    sign = -sign;
                }
            } else {
                cur.push(ch);
            }
            if !ch.is_whitespace() {
                prev_nonspace = Some(ch);
            }
        }
        if cur.trim().is_empty() {
            return Err(Error::Parse(format!("trailing operator in '{s}'")));
        }
        pieces.push((sign, cur));

        let mut terms = Vec::with_capacity(pieces.len());
        for (sign, piece) in pieces {
            let toks: Vec<&str> = piece.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()).collect();
            let (coeff, word_toks) = match toks.first() {
                Some(t) if t.bytes().all(|b| b.is_ascii_digit()) => {
                    let c: BigInt = t.parse().map_err(|_| Error::Parse(format!("bad coefficient '{t}'")))?;
                    (c, &toks[1..])
                }
                _ => (BigInt::one(), &toks[..]),
            };
            let word = Word::parse_with(rank, &word_toks.join(" "), alphabet)?;
            terms.push((word, coeff * sign));
        }
        Ok(Self::from_terms(rank, terms))
    }
}

/// `true` iff `a = ±w·b` for some word `w`. Complete for left multiples:
/// `w` is forced to be `v·u0^{-1}` where `u0` is the first word of `b` and `v`
/// ranges over the support of `a`.
pub fn equal_up_to_trivial_unit(a: &GroupRingElt, b: &GroupRingElt) -> Result<bool> {
    a.check_rank(b)?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    if a.len() != b.len() {
        return Ok(false);
    }
    let (u0, _) = b.terms().next().expect("nonzero");
    let u0_inv = u0.inverse();
    for v in a.support() {
        let w = v.mul_unchecked(&u0_inv);
        let moved = b.left_mul_word(&w);
        if moved == *a || moved.neg() == *a {
            return Ok(true);
        }
    }
    Ok(false)
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if w.is_identity() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{a} {w}")?;
            }
        }
        Ok(())
    }
}

impl RingElement for GroupRingElt {
    const COMMUTATIVE: bool = false;

    fn zero(rank: usize) -> Self {
        GroupRingElt::zero(rank)
    }
    fn one(rank: usize) -> Self {
        GroupRingElt::one(rank)
    }
    fn from_int(rank: usize, c: i64) -> Self {
        GroupRingElt::constant(rank, c)
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        GroupRingElt::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        GroupRingElt::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        GroupRingElt::mul(self, other)
    }
    fn neg(&self) -> Self {
        GroupRingElt::neg(self)
    }
    fn involute(&self) -> Self {
        GroupRingElt::involute(self)
    }
    fn abelianize(&self) -> LaurentPoly {
        GroupRingElt::abelianize(self)
    }
    fn unit_inverse(&self) -> Option<Self> {
        let (s, w) = self.is_trivial_unit()?;
        Some(GroupRingElt::monomial(s, w.inverse()))
    }
    fn term_count(&self) -> usize {
        self.terms.len()
    }
    fn term_classes(&self) -> Vec<Vec<i64>> {
        self.terms.keys().map(Word::exponent_sums).collect()
    }
    fn class_terms(&self) -> Vec<(Vec<i64>, BigInt)> {
        self.terms.iter().map(|(w, c)| (w.exponent_sums(), c.clone())).collect()
    }
    fn syllable_terms(&self) -> Vec<(Vec<(usize, i64)>, BigInt)> {
        self.terms.iter().map(|(w, c)| (w.syllables().collect(), c.clone())).collect()
    }
    fn left_unit_quotient(&self, other: &Self) -> Option<Self> {
        if self.rank != other.rank || self.len() != other.len() || self.is_zero() {
            return None;
        }
        let (u0, c0) = other.terms().next()?;
        let u0_inv = u0.inverse();
        for (v, c) in self.terms() {
            let sign = if c == c0 { 1 } else if *c == -c0 { -1 } else { continue };
            let unit = GroupRingElt::monomial(sign, v.mul_unchecked(&u0_inv));
            if unit.mul(other) == *self {
                return Some(unit);
            }
        }
        None
    }
    fn retain_by_class<F: Fn(&[i64]) -> bool>(&self, keep: F) -> Self {
        GroupRingElt {
            rank: self.rank,
            terms: self.terms.iter().filter(|(w, _)| keep(&w.exponent_sums())).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }
}

impl Add for &GroupRingElt {
    type Output = GroupRingElt;
    fn add(self, rhs: Self) -> GroupRingElt {
        GroupRingElt::add(self, rhs)
    }
}

impl Sub for &GroupRingElt {
    type Output = GroupRingElt;
    fn sub(self, rhs: Self) -> GroupRingElt {
        GroupRingElt::sub(self, rhs)
    }
}

impl Mul for &GroupRingElt {
    type Output = GroupRingElt;
    fn mul(self, rhs: Self) -> GroupRingElt {
        GroupRingElt::mul(self, rhs)
    }
}

impl Neg for &GroupRingElt {
    type Output = GroupRingElt;
    fn neg(self) -> GroupRingElt {
        GroupRingElt::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(rank: usize, s: &str) -> GroupRingElt {
        GroupRingElt::parse(rank, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let x = e(1, "x1");
        let one = GroupRingElt::one(1);
        let p = x.sub(&one).mul(&x.add(&one));
        assert_eq!(p, e(1, "x1^2 - 1"));
        assert!(p.mul(&GroupRingElt::zero(1)).is_zero());
    }

    #[test]
    fn parse_and_display() {
        let a = e(2, "1 + x1 - 2 x1 x2^-1");
        assert_eq!(a.to_string(), "1 + x1 - 2 x1 x2^-1");
        assert_eq!(e(2, "-x1^-1 + 3").to_string(), "3 - x1^-1");
        assert_eq!(e(2, "2*x1*x2"), e(2, "2 x1 x2"));
        assert!(GroupRingElt::parse(2, "x1 +").is_err());
        assert!(GroupRingElt::parse(2, "").is_err());
        assert_eq!(e(1, "x1 - x1"), GroupRingElt::zero(1));
    }

    #[test]
    fn involution() {
        let a = e(2, "2 x1 + x2^-1");
        assert_eq!(a.involute(), e(2, "2 x1^-1 + x2"));
    }

    #[test]
    fn abelianization_examples() {
        let a = e(2, "x1 x2 x1^-1");
        assert_eq!(a.abelianize(), LaurentPoly::monomial(2, vec![0, 1], 1));
        assert!(e(2, "x1 x2 - x2 x1").abelianize().is_zero());
    }

    #[test]
    fn trivial_units() {
        assert_eq!(e(2, "-x1 x2^-1").is_trivial_unit(), Some((-1, Word::parse(2, "x1 x2^-1").unwrap())));
        assert_eq!(e(1, "1 + x1").is_trivial_unit(), None);
        assert_eq!(e(1, "2 x1").is_trivial_unit(), None);
    }

    #[test]
    fn left_trivial_unit_equality() {
        let a = e(2, "1 + x1 x2 - x2");
        let x = Word::parse(2, "x1").unwrap();
        assert!(equal_up_to_trivial_unit(&a, &a.left_mul_word(&x).neg()).unwrap());
        assert!(!equal_up_to_trivial_unit(&e(2, "1 + x1"), &e(2, "1 + x2")).unwrap());
        // conjugates are not left multiples
        let conj = a.left_mul_word(&x).right_mul_word(&x.inverse());
        assert!(!equal_up_to_trivial_unit(&a, &conj).unwrap());
        assert!(equal_up_to_trivial_unit(&a, &GroupRingElt::zero(2)).is_err());
    }
}
