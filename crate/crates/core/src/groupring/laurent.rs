use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RingElement;
use crate::error::{Error, Result};

/// A Laurent polynomial in `dim` variables with integer coefficients: an
/// element of `Z[Z^dim]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

fn accumulate(map: &mut BTreeMap<Vec<i64>, BigInt>, e: Vec<i64>, c: BigInt) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, 1)
    }

    pub fn constant(dim: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(dim, vec![(vec![0; dim], c.into())])
    }

    pub fn monomial(dim: usize, exps: Vec<i64>, c: impl Into<BigInt>) -> Self {
        Self::from_terms(dim, vec![(exps, c.into())])
    }

    /// The variable `t_i` (zero-indexed).
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(dim, e, 1)
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent vector length differs from dimension");
            accumulate(&mut map, e, c);
        }
        LaurentPoly { dim, terms: map }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in Laurent addition");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), c.clone());
        }
        LaurentPoly { dim: self.dim, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in Laurent multiplication");
        let mut terms = BTreeMap::new();
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                accumulate(&mut terms, e, a * b);
            }
        }
        LaurentPoly { dim: self.dim, terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.dim);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `t ↦ t^{-1}`.
    pub fn involute(&self) -> Self {
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone())).collect() }
    }

    /// Componentwise minimum of the exponent vectors.
    pub fn min_exponents(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        Some(m)
    }

    /// gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `Some(±t^v)` inverse when the polynomial is a single `±1` monomial.
    pub fn monomial_unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if c.abs().is_one() {
            Some(LaurentPoly::monomial(self.dim, e.iter().map(|x| -x).collect(), c.clone()))
        } else {
            None
        }
    }

    pub fn is_unit(&self) -> bool {
        self.monomial_unit_inverse().is_some()
    }

    /// Representative of the class modulo multiplication by `±t^v`: shifted so
    /// the componentwise minimum exponent is zero, first term positive.
    pub fn unit_normal(&self) -> Self {
        let Some(m) = self.min_exponents() else {
            return self.clone();
        };
        let neg: Vec<i64> = m.iter().map(|x| -x).collect();
        let shifted = self.shift(&neg);
        match shifted.terms.values().next() {
            Some(c) if c.is_negative() => shifted.neg(),
            _ => shifted,
        }
    }

    pub fn eq_up_to_unit(&self, other: &Self) -> bool {
        self.dim == other.dim && self.unit_normal() == other.unit_normal()
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.dim);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &k) in point.iter().zip(e) {
                t *= pow_rational(x, k);
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let c: f64 = c.to_string().parse().unwrap_or(f64::NAN);
                c * e.iter().zip(point).map(|(&k, &x)| x.powi(k as i32)).product::<f64>()
            })
            .sum()
    }

    /// Pushes exponent vectors through the integer linear map whose rows are
    /// the images of the variables: `t_i ↦ t^{map[i]}`.
    pub fn substitute(&self, map: &[Vec<i64>], target_dim: usize) -> Self {
        assert_eq!(map.len(), self.dim);
        Self::from_terms(
            target_dim,
            self.terms.iter().map(|(e, c)| {
                let mut v = vec![0i64; target_dim];
                for (k, row) in e.iter().zip(map) {
                    for (vi, r) in v.iter_mut().zip(row) {
                        *vi += k * r;
                    }
                }
                (v, c.clone())
            }),
        )
    }

    /// Coordinatewise minimum and maximum exponents of a nonzero polynomial.
    fn exponent_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        (lo, hi)
    }

    /// Exact quotient `self / d` when `d` divides `self` in the Laurent ring.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.dim, d.dim);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.dim));
        }
        // Lex order on Z^k is a group order, so leading terms multiply.
        let (d_lead_e, d_lead_c) = d.terms.iter().next_back().expect("nonzero");
        // a quotient exponent lies in the box [min(self) − min(d), max(self) − max(d)]
        // coordinatewise, which bounds the loop
        let (s_lo, s_hi) = self.exponent_box();
        let (d_lo, d_hi) = d.exponent_box();
        let lo: Vec<i64> = s_lo.iter().zip(&d_lo).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = s_hi.iter().zip(&d_hi).map(|(a, b)| a - b).collect();
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let (q, r) = c.div_rem(d_lead_c);
            if !r.is_zero() {
                return None;
            }
            let qe: Vec<i64> = e.iter().zip(d_lead_e).map(|(a, b)| a - b).collect();
            if qe.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
                return None;
            }
            let term = LaurentPoly::monomial(self.dim, qe.clone(), q.clone());
            rem = rem.sub(&term.mul(d));
            accumulate(&mut quot, qe, q);
        }
        Some(LaurentPoly { dim: self.dim, terms: quot })
    }
}

fn pow_rational(x: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[i64]) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, " ")?;
        }
        first = false;
        if e.len() == 1 {
            write!(f, "t")?;
        } else {
            write!(f, "t{}", i + 1)?;
        }
        if k != 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a} ")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl RingElement for LaurentPoly {
    const COMMUTATIVE: bool = true;

    fn zero(rank: usize) -> Self {
        LaurentPoly::zero(rank)
    }
    fn one(rank: usize) -> Self {
        LaurentPoly::one(rank)
    }
    fn from_int(rank: usize, c: i64) -> Self {
        LaurentPoly::constant(rank, c)
    }
    fn rank(&self) -> usize {
        self.dim
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LaurentPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn involute(&self) -> Self {
        LaurentPoly::involute(self)
    }
    fn abelianize(&self) -> LaurentPoly {
        self.clone()
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.monomial_unit_inverse()
    }
    fn term_count(&self) -> usize {
        self.terms.len()
    }
    fn term_classes(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }
    fn class_terms(&self) -> Vec<(Vec<i64>, BigInt)> {
        self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect()
    }
    fn syllable_terms(&self) -> Vec<(Vec<(usize, i64)>, BigInt)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.iter().enumerate().filter(|(_, &k)| k != 0).map(|(i, &k)| (i + 1, k)).collect(), c.clone()))
            .collect()
    }
    fn left_unit_quotient(&self, other: &Self) -> Option<Self> {
        if self.dim != other.dim || self.len() != other.len() {
            return None;
        }
        self.div_exact(other).filter(LaurentPoly::is_unit)
    }
    fn retain_by_class<F: Fn(&[i64]) -> bool>(&self, keep: F) -> Self {
        LaurentPoly { dim: self.dim, terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect() }
    }
}

/// A quotient of Laurent polynomials, an element of `Q(t_1, ..., t_dim)`.
///
/// No polynomial gcd is taken; the stored pair is normalized only by the
/// common integer content and by moving the denominator's minimal exponent
/// vector to the origin (applied to both parts, so the value is unchanged).
#[derive(Debug, Clone)]
pub struct LaurentFraction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl LaurentFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroElement);
        }
        if num.dim() != den.dim() {
            return Err(Error::RankMismatch { expected: num.dim(), found: den.dim() });
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let dim = p.dim();
        LaurentFraction { num: p, den: LaurentPoly::one(dim) }
    }

    pub fn one(dim: usize) -> Self {
        Self::from_poly(LaurentPoly::one(dim))
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        let g = num.content().gcd(&den.content());
        let (mut num, mut den) = if g.is_one() || g.is_zero() {
            (num, den)
        } else {
            let div = |p: &LaurentPoly| LaurentPoly::from_terms(p.dim(), p.terms().map(|(e, c)| (e.clone(), c / &g)));
            (div(&num), div(&den))
        };
        // cancel when one side divides the other
        if !den.is_zero() && !num.is_zero() && den.len() > 1 {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = LaurentPoly::one(num.dim());
            } else if let Some(q) = den.div_exact(&num) {
                den = q;
                num = LaurentPoly::one(den.dim());
            }
        }
        if let Some(m) = den.min_exponents() {
            let neg: Vec<i64> = m.iter().map(|x| -x).collect();
            den = den.shift(&neg);
            num = num.shift(&neg);
        }
        if den.terms.values().next_back().map(|c| c.is_negative()).unwrap_or(false) {
            den = den.neg();
            num = num.neg();
        }
        LaurentFraction { num, den }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn dim(&self) -> usize {
        self.num.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::normalized(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        LaurentFraction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents need a nonzero value.
    pub fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one(self.dim());
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn involute(&self) -> Self {
        Self::normalized(self.num.involute(), self.den.involute())
    }

    /// `a/b == c/d` iff `ad == bc`.
    pub fn value_eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Equality in `Q(t)^× / ±t^v`.
    pub fn eq_up_to_unit(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.num.mul(&other.den).eq_up_to_unit(&other.num.mul(&self.den))
    }

    /// `±t^v`.
    pub fn is_unit(&self) -> bool {
        match (self.num.min_exponents(), self.den.min_exponents()) {
            (Some(_), Some(_)) => self.eq_up_to_unit(&Self::one(self.dim())),
            _ => false,
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }
}

impl PartialEq for LaurentFraction {
    fn eq(&self, other: &Self) -> bool {
        self.value_eq(other)
    }
}

impl Eq for LaurentFraction {}

impl fmt::Display for LaurentFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentPoly::one(self.dim()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
