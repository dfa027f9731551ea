//! Reduced words in finitely generated free groups, homomorphisms between
//! free groups, and Fox calculus.
//!
//! Words are stored run-length compressed: a sequence of syllables
//! `(generator, exponent)` with nonzero exponents and no two adjacent
//! syllables on the same generator. Generators are one-indexed.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::groupring::{GRMatrix, GroupRingElt};

/// A basis element `x_k` of a free group of a given rank (one-indexed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(usize);

impl Generator {
    pub fn new(index: usize, rank: usize) -> Result<Self> {
        if index == 0 || index > rank {
            return Err(Error::GeneratorOutOfRange { index, rank });
        }
        Ok(Generator(index))
    }

    pub fn index(self) -> usize {
        self.0
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    syllables: Vec<(u32, i64)>,
}

fn push_syllable(out: &mut Vec<(u32, i64)>, gen: u32, exp: i64) {
    if exp == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.0 == gen => {
            last.1 += exp;
            if last.1 == 0 {
                out.pop();
            }
        }
        _ => out.push((gen, exp)),
    }
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, syllables: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        Self::power(rank, index, 1)
    }

    /// `x_index^exp`.
    pub fn power(rank: usize, index: usize, exp: i64) -> Result<Self> {
        Generator::new(index, rank)?;
        let mut syllables = Vec::new();
        push_syllable(&mut syllables, index as u32, exp);
        Ok(Word { rank, syllables })
    }

    /// Freely reduces a raw sequence of `(generator index, ±1)` letters.
    pub fn reduce(rank: usize, letters: &[(usize, i8)]) -> Result<Self> {
        let mut syllables = Vec::new();
        for &(g, s) in letters {
            Generator::new(g, rank)?;
            push_syllable(&mut syllables, g as u32, s.signum() as i64);
        }
        Ok(Word { rank, syllables })
    }

    /// Builds a word from `(generator, exponent)` blocks, reducing as it goes.
    pub fn from_syllables(rank: usize, blocks: &[(usize, i64)]) -> Result<Self> {
        let mut syllables = Vec::new();
        for &(g, e) in blocks {
            Generator::new(g, rank)?;
            push_syllable(&mut syllables, g as u32, e);
        }
        Ok(Word { rank, syllables })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Syllables as `(generator index, nonzero exponent)`.
    pub fn syllables(&self) -> impl ExactSizeIterator<Item = (usize, i64)> + '_ {
        self.syllables.iter().map(|&(g, e)| (g as usize, e))
    }

    /// Expanded letters as `(generator index, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.syllables
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat((g as usize, e.signum() as i8)).take(e.unsigned_abs() as usize))
    }

    /// Word length in letters.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        let mut syllables = self.syllables.clone();
        syllables.reserve(other.syllables.len());
        for &(g, e) in &other.syllables {
            push_syllable(&mut syllables, g, e);
        }
        Word { rank: self.rank, syllables }
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.mul_unchecked(&base);
        }
        out
    }

    /// Exponent-sum vector: the image of the word in `Z^rank`.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &(g, e) in &self.syllables {
            v[g as usize - 1] += e;
        }
        v
    }

    /// All prefixes, from the identity up to the word itself.
    pub fn prefixes(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut cur = Word::identity(self.rank);
        out.push(cur.clone());
        for (g, s) in self.letters() {
            push_syllable(&mut cur.syllables, g as u32, s as i64);
            out.push(cur.clone());
        }
        out
    }

    /// Re-embeds the word into a free group of larger (or equal) rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        if let Some(&(g, _)) = self.syllables.iter().max_by_key(|s| s.0) {
            Generator::new(g as usize, rank)?;
        }
        Ok(Word { rank, syllables: self.syllables.clone() })
    }

    pub fn parse(rank: usize, s: &str) -> Result<Word> {
        Self::parse_with(rank, s, &Alphabet::default())
    }

    /// Parses the word grammar: tokens `x<k>` or `x<k>^<e>` separated by
    /// whitespace or `*`; `1` or the empty string is the identity. Tokens made
    /// of letters are read through `alphabet`, uppercase meaning inverse, with
    /// an optional trailing `^<e>` applying to the last letter.
    pub fn parse_with(rank: usize, s: &str, alphabet: &Alphabet) -> Result<Word> {
        let mut syllables = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            if tok == "1" {
                continue;
            }
            let (body, exp) = match tok.split_once('^') {
                Some((b, e)) => {
                    let e: i64 = e
                        .trim_start_matches('(')
                        .trim_end_matches(')')
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in token '{tok}'")))?;
                    if e == 0 {
                        return Err(Error::Parse(format!("zero exponent in token '{tok}'")));
                    }
                    (b, e)
                }
                None => (tok, 1),
            };
            if let Some(digits) = body.strip_prefix('x').filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())) {
                let idx: usize = digits.parse().map_err(|_| Error::Parse(format!("bad generator '{body}'")))?;
                Generator::new(idx, rank)?;
                push_syllable(&mut syllables, idx as u32, exp);
                continue;
            }
            if body.is_empty() || !body.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(Error::Parse(format!("unrecognized token '{tok}'")));
            }
            let chars: Vec<char> = body.chars().collect();
            for (i, &c) in chars.iter().enumerate() {
                let (idx, sign) = alphabet.lookup(c)?;
                Generator::new(idx, rank)?;
                let e = if i + 1 == chars.len() { sign * exp } else { sign };
                push_syllable(&mut syllables, idx as u32, e);
            }
        }
        Ok(Word { rank, syllables })
    }
}

/// Letter names for the single-letter word syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet { letters: ('a'..='z').collect() }
    }
}

impl Alphabet {
    /// `letters[i]` names generator `i + 1`.
    pub fn new(letters: &str) -> Result<Self> {
        let letters: Vec<char> = letters.chars().map(|c| c.to_ascii_lowercase()).collect();
        if letters.iter().any(|c| !c.is_ascii_lowercase()) {
            return Err(Error::Parse(format!("alphabet must be ascii letters, got '{}'", letters.iter().collect::<String>())));
        }
        let mut sorted = letters.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != letters.len() {
            return Err(Error::Parse("alphabet has repeated letters".into()));
        }
        Ok(Alphabet { letters })
    }

    fn lookup(&self, c: char) -> Result<(usize, i64)> {
        let sign = if c.is_ascii_uppercase() { -1 } else { 1 };
        let lc = c.to_ascii_lowercase();
        self.letters
            .iter()
            .position(|&l| l == lc)
            .map(|i| (i + 1, sign))
            .ok_or_else(|| Error::Parse(format!("letter '{c}' not in alphabet")))
    }
}

/// ShortLex: shorter words first, then lexicographic on letters with
/// `x1 < x1^-1 < x2 < x2^-1 < ...`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| {
                let key = |(g, s): (usize, i8)| 2 * g + usize::from(s < 0);
                self.letters().map(key).cmp(other.letters().map(key))
            })
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "x{g}")?;
            } else {
                write!(f, "x{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A homomorphism `F_n -> F_m` given by the images of the domain generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeHom {
    domain_rank: usize,
    codomain_rank: usize,
    images: Vec<Word>,
}

impl FreeHom {
    pub fn new(domain_rank: usize, codomain_rank: usize, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain_rank {
            return Err(Error::DimensionMismatch(format!(
                "homomorphism from rank {domain_rank} needs {domain_rank} images, got {}",
                images.len()
            )));
        }
        for w in &images {
            if w.rank() != codomain_rank {
                return Err(Error::RankMismatch { expected: codomain_rank, found: w.rank() });
            }
        }
        Ok(FreeHom { domain_rank, codomain_rank, images })
    }

    pub fn identity(rank: usize) -> Self {
        let images = (1..=rank).map(|i| Word::generator(rank, i).expect("index in range")).collect();
        FreeHom { domain_rank: rank, codomain_rank: rank, images }
    }

    /// Parses images written in the word grammar.
    pub fn parse(domain_rank: usize, codomain_rank: usize, images: &[&str], alphabet: &Alphabet) -> Result<Self> {
        let words = images
            .iter()
            .map(|s| Word::parse_with(codomain_rank, s, alphabet))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain_rank, codomain_rank, words)
    }

    pub fn domain_rank(&self) -> usize {
        self.domain_rank
    }

    pub fn codomain_rank(&self) -> usize {
        self.codomain_rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() != self.domain_rank {
            return Err(Error::RankMismatch { expected: self.domain_rank, found: w.rank() });
        }
        let mut out = Word::identity(self.codomain_rank);
        for (g, e) in w.syllables() {
            let img = &self.images[g - 1];
            out = out.mul_unchecked(&img.pow(e));
        }
        Ok(out)
    }

    /// Applies the induced ring map `Z F_n -> Z F_m`.
    pub fn apply_elt(&self, a: &GroupRingElt) -> Result<GroupRingElt> {
        if a.rank() != self.domain_rank {
            return Err(Error::RankMismatch { expected: self.domain_rank, found: a.rank() });
        }
        let mut terms = Vec::with_capacity(a.len());
        for (w, c) in a.terms() {
            terms.push((self.apply(w)?, c.clone()));
        }
        Ok(GroupRingElt::from_terms(self.codomain_rank, terms))
    }

    /// `psi ∘ self`.
    pub fn then(&self, psi: &FreeHom) -> Result<FreeHom> {
        compose(psi, self)
    }
}

/// `psi ∘ phi`: first `phi`, then `psi`.
pub fn compose(psi: &FreeHom, phi: &FreeHom) -> Result<FreeHom> {
    if phi.codomain_rank != psi.domain_rank {
        return Err(Error::RankMismatch { expected: psi.domain_rank, found: phi.codomain_rank });
    }
    let images = phi.images.iter().map(|w| psi.apply(w)).collect::<Result<Vec<_>>>()?;
    FreeHom::new(phi.domain_rank, psi.codomain_rank, images)
}

/// The Fox derivative `∂w/∂x_j`, computed in one left-to-right pass over the
/// syllables while accumulating the prefix.
pub fn fox_derivative(w: &Word, j: usize) -> Result<GroupRingElt> {
    Generator::new(j, w.rank())?;
    let rank = w.rank();
    let mut terms: Vec<(Word, BigInt)> = Vec::new();
    let mut prefix = Word::identity(rank);
    for (g, e) in w.syllables() {
        if g == j {
            let x = Word::generator(rank, g)?;
            if e > 0 {
                // p (1 + x + ... + x^{e-1})
                let mut cur = prefix.clone();
                for _ in 0..e {
                    terms.push((cur.clone(), BigInt::from(1)));
                    cur = cur.mul_unchecked(&x);
                }
            } else {
                // -p (x^-1 + ... + x^e)
                let xi = x.inverse();
                let mut cur = prefix.clone();
                for _ in 0..(-e) {
                    cur = cur.mul_unchecked(&xi);
                    terms.push((cur.clone(), BigInt::from(-1)));
                }
            }
        }
        prefix = prefix.mul_unchecked(&Word::power(rank, g, e)?);
    }
    Ok(GroupRingElt::from_terms(rank, terms))
}

/// Fox derivative extended Z-linearly to group-ring elements.
pub fn fox_derivative_elt(a: &GroupRingElt, j: usize) -> Result<GroupRingElt> {
    let mut acc = GroupRingElt::zero(a.rank());
    for (w, c) in a.terms() {
        acc = acc.add(&fox_derivative(w, j)?.scale(c));
    }
    Ok(acc)
}

/// `(J_φ)_{ij} = ∂φ(x_i)/∂y_j`, an `n × m` matrix over `Z F_m`.
pub fn fox_jacobian(phi: &FreeHom) -> GRMatrix {
    let n = phi.domain_rank;
    let m = phi.codomain_rank;
    let mut entries = Vec::with_capacity(n * m);
    for img in &phi.images {
        for j in 1..=m {
            entries.push(fox_derivative(img, j).expect("generator in range"));
        }
    }
    GRMatrix::from_entries(n, m, m, entries).expect("shape is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn reduce_cancels() {
        assert!(Word::reduce(1, &[(1, 1), (1, -1)]).unwrap().is_identity());
        let r = Word::reduce(2, &[(1, 1), (2, 1), (2, -1), (1, 1)]).unwrap();
        assert_eq!(r, Word::power(2, 1, 2).unwrap());
        assert!(matches!(Word::reduce(2, &[(3, 1)]), Err(Error::GeneratorOutOfRange { .. })));
    }

    #[test]
    fn invert_and_multiply() {
        let x = w(2, "x1");
        assert!(x.multiply(&x.inverse()).unwrap().is_identity());
        assert_eq!(w(2, "x1 x2^-1").inverse(), w(2, "x2 x1^-1"));
        assert!(matches!(x.multiply(&w(3, "x1")), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(w(2, "x1*x2^-1*x1"), w(2, "x1 x2^-1 x1"));
        assert!(w(2, "1").is_identity());
        assert!(w(2, "").is_identity());
        assert_eq!(w(2, "x1^3").to_string(), "x1^3");
        assert!(Word::parse(2, "x1^0").is_err());
        assert!(Word::parse(2, "x3").is_err());
        let xy = Alphabet::new("xy").unwrap();
        let u = Word::parse_with(2, "yxyXY", &xy).unwrap();
        assert_eq!(u, w(2, "x2 x1 x2 x1^-1 x2^-1"));
        assert_eq!(Word::parse_with(2, "y^2 x", &xy).unwrap(), w(2, "x2^2 x1"));
    }

    #[test]
    fn shortlex_order() {
        let mut v = vec![w(2, "x2"), w(2, "x1^-1"), w(2, "1"), w(2, "x1 x1"), w(2, "x1")];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["1", "x1", "x1^-1", "x2", "x1^2"]);
    }

    #[test]
    fn hom_application() {
        let phi = FreeHom::parse(2, 2, &["x1^2", "x2"], &Alphabet::default()).unwrap();
        assert_eq!(phi.apply(&w(2, "x1 x2")).unwrap(), w(2, "x1 x1 x2"));
        assert!(phi.apply(&Word::identity(2)).unwrap().is_identity());
        let id = FreeHom::identity(2);
        assert_eq!(compose(&id, &phi).unwrap(), phi);
        assert_eq!(compose(&phi, &id).unwrap(), phi);
        assert!(FreeHom::new(2, 2, vec![w(2, "x1")]).is_err());
    }

    #[test]
    fn fox_axioms() {
        let y = w(1, "x1");
        assert_eq!(fox_derivative(&y, 1).unwrap(), GroupRingElt::one(1));
        assert!(fox_derivative(&Word::identity(1), 1).unwrap().is_zero());
        let d = fox_derivative(&y.inverse(), 1).unwrap();
        assert_eq!(d, GroupRingElt::monomial(-1, y.inverse()));
        assert!(fox_derivative(&y, 2).is_err());
    }

    #[test]
    fn fox_genus_two_entry() {
        // ∂(y x y x^-1 y^-1)/∂x = y - y x y x^-1
        let xy = Alphabet::new("xy").unwrap();
        let u = Word::parse_with(2, "yxyXY", &xy).unwrap();
        let d = fox_derivative(&u, 1).unwrap();
        let expect = GroupRingElt::parse_with(2, "y - yxyX", &xy).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn jacobian_of_identity() {
        let j = fox_jacobian(&FreeHom::identity(2));
        assert_eq!(j, GRMatrix::identity(2, 2));
    }

    #[test]
    fn powers_in_fox_derivative() {
        // ∂(x^3)/∂x = 1 + x + x^2, ∂(x^-2)/∂x = -x^-1 - x^-2
        let d = fox_derivative(&w(1, "x1^3"), 1).unwrap();
        assert_eq!(d, GroupRingElt::parse(1, "1 + x1 + x1^2").unwrap());
        let d = fox_derivative(&w(1, "x1^-2"), 1).unwrap();
        assert_eq!(d, GroupRingElt::parse(1, "-x1^-1 - x1^-2").unwrap());
    }
}
