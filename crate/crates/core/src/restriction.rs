//! Finite-index normal subgroups of free groups given by permutation actions,
//! Reidemeister–Schreier rewriting and the restriction matrix `Λ_s`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::complex::TorsionValue;
use crate::error::{Error, Result};
use crate::freegroup::Word;
use crate::groupring::{laurent_det, GRMatrix, GroupRingElt, LaurentFraction};
use crate::leading::{leading_elt, leading_fraction, Character};

/// The right action of `F_m` on the cosets `G/L`, one permutation of
/// `0..degree` per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuotientSpec {
    rank: usize,
    degree: usize,
    perms: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

/// Wire form with one-based permutations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSpecDoc {
    pub rank: usize,
    pub degree: usize,
    pub perms: Vec<Vec<usize>>,
}

impl FiniteQuotientSpec {
    /// `perms` are one-based images, `perms[g][k-1]` being the image of `k`
    /// under generator `g + 1`.
    pub fn new(rank: usize, degree: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Schema("quotient degree must be positive".into()));
        }
        if perms.len() != rank {
            return Err(Error::Schema(format!("{rank} generators need {rank} permutations, got {}", perms.len())));
        }
        let mut zero_based = Vec::with_capacity(rank);
        let mut inverses = Vec::with_capacity(rank);
        for p in &perms {
            if p.len() != degree {
                return Err(Error::Schema(format!("permutation {p:?} does not have length {degree}")));
            }
            let q: Vec<usize> = p.iter().map(|&k| k.wrapping_sub(1)).collect();
            let mut inv = vec![usize::MAX; degree];
            for (k, &img) in q.iter().enumerate() {
                if img >= degree || inv[img] != usize::MAX {
                    return Err(Error::Schema(format!("{p:?} is not a permutation of 1..{degree}")));
                }
                inv[img] = k;
            }
            zero_based.push(q);
            inverses.push(inv);
        }
        Ok(FiniteQuotientSpec { rank, degree, perms: zero_based, inverses })
    }

    pub fn from_doc(doc: &QuotientSpecDoc) -> Result<Self> {
        Self::new(doc.rank, doc.degree, doc.perms.clone())
    }

    pub fn to_doc(&self) -> QuotientSpecDoc {
        QuotientSpecDoc { rank: self.rank, degree: self.degree, perms: self.perms.iter().map(|p| p.iter().map(|k| k + 1).collect()).collect() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn step(&self, k: usize, g: usize, sign: i8) -> usize {
        if sign > 0 {
            self.perms[g - 1][k]
        } else {
            self.inverses[g - 1][k]
        }
    }

    /// The coset reached from `k` by reading `w`.
    pub fn act(&self, k: usize, w: &Word) -> usize {
        w.letters().fold(k, |c, (g, s)| self.step(c, g, s))
    }
}

/// Coset table, Schreier transversal and the induced free basis of `L`.
#[derive(Debug, Clone)]
pub struct SchreierData {
    spec: FiniteQuotientSpec,
    transversal: Vec<Word>,
    /// Basis word of `L` for each non-tree positive edge `(coset, generator)`.
    basis: Vec<Word>,
    edge_basis: HashMap<(usize, usize), usize>,
}

/// Letters in the order `x_1, x_2, ...` (positive only).
pub fn default_letter_order(rank: usize) -> Vec<(usize, i8)> {
    (1..=rank).map(|g| (g, 1)).collect()
}

pub fn coset_table(spec: &FiniteQuotientSpec) -> Result<SchreierData> {
    coset_table_with(spec, &default_letter_order(spec.rank))
}

/// Builds the transversal along the BFS tree that explores letters in
/// `order`; different orders give different sections.
pub fn coset_table_with(spec: &FiniteQuotientSpec, order: &[(usize, i8)]) -> Result<SchreierData> {
    let d = spec.degree;
    let m = spec.rank;
    let mut transversal: Vec<Option<Word>> = vec![None; d];
    transversal[0] = Some(Word::identity(m));
    let mut tree: HashSet<(usize, usize)> = HashSet::new();
    let mut queue = VecDeque::from([0]);
    while let Some(k) = queue.pop_front() {
        for &(g, s) in order {
            if g == 0 || g > m {
                return Err(Error::GeneratorOutOfRange { index: g, rank: m });
            }
            let next = spec.step(k, g, s);
            if transversal[next].is_none() {
                let t = transversal[k].as_ref().expect("visited").mul_unchecked(&Word::power(m, g, s.into())?);
                transversal[next] = Some(t);
                tree.insert(if s > 0 { (k, g) } else { (next, g) });
                queue.push_back(next);
            }
        }
    }
    let transversal: Vec<Word> = transversal.into_iter().collect::<Option<_>>().ok_or(Error::NotTransitive)?;
    let mut basis = Vec::new();
    let mut edge_basis = HashMap::new();
    for k in 0..d {
        for g in 1..=m {
            if tree.contains(&(k, g)) {
                continue;
            }
            let target = spec.step(k, g, 1);
            let w = transversal[k].mul_unchecked(&Word::generator(m, g)?).mul_unchecked(&transversal[target].inverse());
            edge_basis.insert((k, g), basis.len());
            basis.push(w);
        }
    }
    // L is normal iff it fixes every coset, i.e. each generator of L does
    for w in &basis {
        if (0..d).any(|k| spec.act(k, w) != k) {
            return Err(Error::NotNormal);
        }
    }
    Ok(SchreierData { spec: spec.clone(), transversal, basis, edge_basis })
}

impl SchreierData {
    pub fn spec(&self) -> &FiniteQuotientSpec {
        &self.spec
    }

    pub fn transversal(&self) -> &[Word] {
        &self.transversal
    }

    /// Free basis of `L` as words of `F`.
    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    /// `d(m − 1) + 1`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Expresses `w ∈ L` over the Schreier basis.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        let mut c = 0;
        let mut letters = Vec::new();
        for (g, s) in w.letters() {
            if s > 0 {
                if let Some(&b) = self.edge_basis.get(&(c, g)) {
                    letters.push((b + 1, 1i8));
                }
                c = self.spec.step(c, g, 1);
            } else {
                let prev = self.spec.step(c, g, -1);
                if let Some(&b) = self.edge_basis.get(&(prev, g)) {
                    letters.push((b + 1, -1i8));
                }
                c = prev;
            }
        }
        if c != 0 {
            return Err(Error::NotInSubgroup);
        }
        Word::reduce(self.rank(), &letters)
    }

    /// Inverse of [`Self::rewrite`]: substitutes the basis words.
    pub fn expand(&self, v: &Word) -> Result<Word> {
        if v.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: v.rank() });
        }
        let m = self.spec.rank;
        Ok(v.syllables().fold(Word::identity(m), |acc, (b, e)| acc.mul_unchecked(&self.basis[b - 1].pow(e))))
    }

    /// `φ|_L` on the Schreier basis.
    pub fn restrict_character(&self, phi: &Character) -> Result<Character> {
        if phi.dim() != self.spec.rank {
            return Err(Error::DimensionMismatch(format!("character of dimension {} on rank {}", phi.dim(), self.spec.rank)));
        }
        let values: Vec<BigRational> = self.basis.iter().map(|w| phi.eval(&w.exponent_sums())).collect();
        Ok(Character::new(values))
    }
}

/// `Λ_s(z)`: row `k` holds the `ZL`-coordinates of `g_k·z` in
/// `⊕_j ZL·g_j`, rewritten over the Schreier basis.
pub fn lambda_matrix(z: &GroupRingElt, data: &SchreierData) -> Result<GRMatrix> {
    if z.rank() != data.spec.rank {
        return Err(Error::RankMismatch { expected: data.spec.rank, found: z.rank() });
    }
    let d = data.spec.degree;
    let r = data.rank();
    let mut rows: Vec<Vec<GroupRingElt>> = vec![vec![GroupRingElt::zero(r); d]; d];
    for (k, row) in rows.iter_mut().enumerate() {
        let gk = &data.transversal[k];
        for (w, c) in z.terms() {
            let gw = gk.mul_unchecked(w);
            let j = data.spec.act(0, &gw);
            let h = gw.mul_unchecked(&data.transversal[j].inverse());
            row[j] = row[j].add(&GroupRingElt::monomial(c.clone(), data.rewrite(&h)?));
        }
    }
    GRMatrix::from_rows(r, d, rows)
}

/// Applies `Λ_s` entrywise, giving a `pd × pd` matrix for a `p × p` input.
pub fn lambda_block(m: &GRMatrix, data: &SchreierData) -> Result<GRMatrix> {
    let d = data.spec.degree;
    let r = data.rank();
    let mut out = GRMatrix::zero(m.rows() * d, m.cols() * d, r);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let lam = lambda_matrix(m.get(i, j), data)?;
            for a in 0..d {
                for b in 0..d {
                    out.set(i * d + a, j * d + b, lam.get(a, b).clone());
                }
            }
        }
    }
    Ok(out)
}

/// Abelianized `det Λ_s(z)`, the computable shadow of `res(z)`.
pub fn res_invariants(z: &GroupRingElt, data: &SchreierData) -> Result<LaurentFraction> {
    if z.is_zero() {
        return Err(Error::ZeroElement);
    }
    let det = laurent_det(&lambda_matrix(z, data)?.abelianize())?;
    if det.is_zero() {
        return Err(Error::InvariantUnavailable("abelianized restriction matrix is singular".into()));
    }
    Ok(LaurentFraction::from_poly(det))
}

/// Restricts a formal product factorwise and multiplies the abelianized
/// determinants with their exponents.
pub fn res_torsion(tau: &TorsionValue<GroupRingElt>, data: &SchreierData) -> Result<LaurentFraction> {
    let product = tau.product().ok_or(Error::ZeroElement)?;
    let mut acc = LaurentFraction::one(data.rank());
    for f in &product.factors {
        let det = laurent_det(&lambda_block(&f.matrix, data)?.abelianize())?;
        if det.is_zero() {
            return Err(Error::InvariantUnavailable("abelianized restriction of a factor is singular".into()));
        }
        let det = LaurentFraction::from_poly(det);
        acc = if f.exponent > 0 { acc.mul(&det) } else { acc.div(&det)? };
    }
    Ok(acc)
}

/// Compares `L_{φ|L}(res z)` with `res(L_φ z)` up to `±t^v`.
pub fn check_res_leading_commute(z: &GroupRingElt, phi: &Character, data: &SchreierData) -> Result<bool> {
    let phi_l = data.restrict_character(phi)?;
    let lhs = leading_fraction(&phi_l, &res_invariants(z, data)?)?;
    let rhs = res_invariants(&leading_elt(phi, z)?, data)?;
    Ok(lhs.eq_up_to_unit(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::LaurentPoly;
    use num_bigint::BigInt;

    fn index2_z() -> SchreierData {
        coset_table(&FiniteQuotientSpec::new(1, 2, vec![vec![2, 1]]).unwrap()).unwrap()
    }

    #[test]
    fn tables() {
        let data = index2_z();
        assert_eq!(data.rank(), 1);
        assert_eq!(data.transversal(), &[Word::identity(1), Word::parse(1, "x1").unwrap()]);
        assert_eq!(data.basis(), &[Word::parse(1, "x1^2").unwrap()]);
        let s = FiniteQuotientSpec::new(2, 2, vec![vec![2, 1], vec![2, 1]]).unwrap();
        assert_eq!(coset_table(&s).unwrap().rank(), 3);
        let trivial = coset_table(&FiniteQuotientSpec::new(2, 1, vec![vec![1], vec![1]]).unwrap()).unwrap();
        assert_eq!(trivial.basis(), &[Word::parse(2, "x1").unwrap(), Word::parse(2, "x2").unwrap()]);
    }

    #[test]
    fn errors() {
        let s = FiniteQuotientSpec::new(1, 3, vec![vec![2, 1, 3]]).unwrap();
        assert!(matches!(coset_table(&s), Err(Error::NotTransitive)));
        // S_3 acting on 3 points: stabilizer is not normal
        let s = FiniteQuotientSpec::new(2, 3, vec![vec![2, 3, 1], vec![2, 1, 3]]).unwrap();
        assert!(matches!(coset_table(&s), Err(Error::NotNormal)));
        assert!(FiniteQuotientSpec::new(1, 2, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn rewriting() {
        let data = index2_z();
        assert_eq!(data.rewrite(&Word::parse(1, "x1^2").unwrap()).unwrap(), Word::parse(1, "x1").unwrap());
        assert!(data.rewrite(&Word::identity(1)).unwrap().is_identity());
        assert!(matches!(data.rewrite(&Word::parse(1, "x1").unwrap()), Err(Error::NotInSubgroup)));
        let data = coset_table(&FiniteQuotientSpec::new(2, 2, vec![vec![2, 1], vec![2, 1]]).unwrap()).unwrap();
        let w = Word::parse(2, "x1 x2^-1 x1^3 x2").unwrap();
        assert_eq!(data.expand(&data.rewrite(&w).unwrap()).unwrap(), w);
    }

    #[test]
    fn lambda_of_index_two() {
        let data = index2_z();
        let z = GroupRingElt::parse(1, "x1 - 1").unwrap();
        let lam = lambda_matrix(&z, &data).unwrap();
        let expected = GRMatrix::from_rows(
            1,
            2,
            vec![vec![GroupRingElt::parse(1, "-1").unwrap(), GroupRingElt::one(1)], vec![GroupRingElt::parse(1, "x1").unwrap(), GroupRingElt::parse(1, "-1").unwrap()]],
        )
        .unwrap();
        assert_eq!(lam, expected);
        let t_minus_1 = LaurentPoly::from_terms(1, [(vec![1], BigInt::from(1)), (vec![0], BigInt::from(-1))]);
        assert!(res_invariants(&z, &data).unwrap().eq_up_to_unit(&LaurentFraction::from_poly(t_minus_1)));
        assert_eq!(lambda_matrix(&GroupRingElt::one(1), &data).unwrap(), GRMatrix::identity(2, 1));
        assert!(res_invariants(&GroupRingElt::parse(1, "-x1^3").unwrap(), &data).unwrap().is_unit());
    }

    #[test]
    fn leading_commutes_on_index_two() {
        let data = index2_z();
        let z = GroupRingElt::parse(1, "x1 - 1").unwrap();
        assert!(check_res_leading_commute(&z, &Character::from_ints(&[1]), &data).unwrap());
    }
}
