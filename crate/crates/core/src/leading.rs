//! Characters on the free abelianization, the degree `δ_φ` and the leading
//! term map `L_φ` on ring elements, matrices and chain complexes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::complex::BasedComplex;
use crate::error::{Error, Result};
use crate::freegroup::Word;
use crate::groupring::{LaurentFraction, Matrix, RingElement};

/// A rational linear functional on `Z^dim`, given by its values on the
/// standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    values: Vec<BigRational>,
}

impl Character {
    pub fn new(values: Vec<BigRational>) -> Self {
        Character { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Character { values: values.iter().map(|&v| BigRational::from_integer(v.into())).collect() }
    }

    pub fn zero(dim: usize) -> Self {
        Character { values: vec![BigRational::zero(); dim] }
    }

    /// Parses entries like `"3"`, `"-1/2"`.
    pub fn parse(values: &[&str]) -> Result<Self> {
        let mut out = Vec::with_capacity(values.len());
        for v in values {
            out.push(parse_rational(v)?);
        }
        Ok(Character { values: out })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Character { values: self.values.iter().map(|v| v * r).collect() }
    }

    /// `φ(h)` for a homology class `h`.
    pub fn eval(&self, class: &[i64]) -> BigRational {
        debug_assert_eq!(class.len(), self.values.len());
        self.values.iter().zip(class).filter(|(_, &k)| k != 0).map(|(v, &k)| v * BigInt::from(k)).sum()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch(format!("character of dimension {} on rank {dim}", self.dim())));
        }
        Ok(())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// `δ_φ` values: a rational, or `+∞` for zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Degree {
    Finite(BigRational),
    Infinite,
}

impl Degree {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Degree::Finite(r) => Some(r),
            Degree::Infinite => None,
        }
    }

    pub fn add(&self, other: &Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::Infinite,
        }
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
            (Degree::Finite(_), Degree::Infinite) => Ordering::Less,
            (Degree::Infinite, Degree::Finite(_)) => Ordering::Greater,
            (Degree::Infinite, Degree::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(r) => write!(f, "{r}"),
            Degree::Infinite => write!(f, "inf"),
        }
    }
}

pub fn char_value(phi: &Character, w: &Word) -> Result<BigRational> {
    phi.check_dim(w.rank())?;
    Ok(phi.eval(&w.exponent_sums()))
}

pub fn delta<R: RingElement>(phi: &Character, a: &R) -> Result<Degree> {
    phi.check_dim(a.rank())?;
    Ok(a.term_classes().iter().map(|c| phi.eval(c)).min().map_or(Degree::Infinite, Degree::Finite))
}

/// Terms of `a` of value exactly `level`.
fn terms_at<R: RingElement>(phi: &Character, a: &R, level: &BigRational) -> R {
    a.retain_by_class(|c| phi.eval(c) == *level)
}

pub fn leading_elt<R: RingElement>(phi: &Character, a: &R) -> Result<R> {
    match delta(phi, a)? {
        Degree::Infinite => Ok(a.clone()),
        Degree::Finite(d) => Ok(terms_at(phi, a, &d)),
    }
}

pub fn is_phi_pure<R: RingElement>(phi: &Character, a: &R) -> Result<bool> {
    Ok(leading_elt(phi, a)? == *a)
}

/// `δ_φ` of a matrix: the minimum over its entries.
pub fn matrix_delta<R: RingElement>(phi: &Character, m: &Matrix<R>) -> Result<Degree> {
    phi.check_dim(m.rank())?;
    let mut best = Degree::Infinite;
    for e in m.entries() {
        best = best.min(delta(phi, e)?);
    }
    Ok(best)
}

/// Keeps, in every entry, only the terms of value `δ_φ(M)`.
pub fn leading_matrix<R: RingElement>(phi: &Character, m: &Matrix<R>) -> Result<Matrix<R>> {
    match matrix_delta(phi, m)? {
        Degree::Infinite => Ok(m.clone()),
        Degree::Finite(d) => Ok(m.map(m.rank(), |e| terms_at(phi, e, &d))),
    }
}

/// Applies [`leading_matrix`] degreewise; fails if the input does not
/// validate.
pub fn leading_complex<R: RingElement>(phi: &Character, c: &BasedComplex<R>) -> Result<BasedComplex<R>> {
    c.validate()?;
    phi.check_dim(c.rank())?;
    let boundaries = c.boundaries_top_down().iter().map(|a| leading_matrix(phi, a)).collect::<Result<Vec<_>>>()?;
    let out = BasedComplex::new(c.rank(), c.dims().to_vec(), boundaries)?;
    out.validate()?;
    Ok(out)
}

/// `L_φ(p/q) = L_φ(p)/L_φ(q)` on the commutative fraction field.
pub fn leading_fraction(phi: &Character, f: &LaurentFraction) -> Result<LaurentFraction> {
    let num = leading_elt(phi, f.numerator())?;
    let den = leading_elt(phi, f.denominator())?;
    LaurentFraction::new(num, den)
}

/// `δ_φ(p/q) = δ_φ(p) − δ_φ(q)`.
pub fn fraction_delta(phi: &Character, f: &LaurentFraction) -> Result<Degree> {
    let num = delta(phi, f.numerator())?;
    let den = delta(phi, f.denominator())?;
    Ok(match (num, den) {
        (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a - b),
        _ => Degree::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::GroupRingElt;

    fn e(rank: usize, s: &str) -> GroupRingElt {
        GroupRingElt::parse(rank, s).unwrap()
    }

    #[test]
    fn char_values() {
        let phi = Character::from_ints(&[1, 0]);
        assert_eq!(char_value(&phi, &Word::parse(2, "x1 x2^3").unwrap()).unwrap(), BigRational::from_integer(1.into()));
        assert!(char_value(&Character::zero(2), &Word::parse(2, "x1^5").unwrap()).unwrap().is_zero());
        assert!(char_value(&phi, &Word::parse(3, "x1").unwrap()).is_err());
    }

    #[test]
    fn degree_and_leading() {
        let phi = Character::from_ints(&[1]);
        assert_eq!(delta(&phi, &e(1, "x1 - 1")).unwrap(), Degree::Finite(BigRational::zero()));
        assert_eq!(delta(&phi, &GroupRingElt::zero(1)).unwrap(), Degree::Infinite);
        assert_eq!(leading_elt(&phi, &e(1, "1 + x1")).unwrap(), e(1, "1"));
        assert_eq!(leading_elt(&Character::from_ints(&[-1]), &e(1, "1 + x1")).unwrap(), e(1, "x1"));
        let psi = Character::from_ints(&[1, 1]);
        assert_eq!(leading_elt(&psi, &e(2, "1 + x1 + x2")).unwrap(), e(2, "1"));
        assert!(!is_phi_pure(&phi, &e(1, "1 + x1")).unwrap());
        assert!(is_phi_pure(&phi, &e(1, "-3 x1^2")).unwrap());
    }

    #[test]
    fn leading_of_matrix() {
        let phi = Character::from_ints(&[1]);
        let m = Matrix::from_rows(1, 2, vec![vec![e(1, "1"), e(1, "x1")], vec![e(1, "x1"), e(1, "x1^2")]]).unwrap();
        let l = leading_matrix(&phi, &m).unwrap();
        let expected =
            Matrix::from_rows(1, 2, vec![vec![e(1, "1"), GroupRingElt::zero(1)], vec![GroupRingElt::zero(1), GroupRingElt::zero(1)]]).unwrap();
        assert_eq!(l, expected);
    }

    #[test]
    fn rational_parsing() {
        let phi = Character::parse(&["1/2", "-3"]).unwrap();
        assert_eq!(phi.to_string(), "(1/2, -3)");
        assert!(Character::parse(&["1/0"]).is_err());
    }
}
