//! Based free chain complexes, matrix-chain torsion, unit-pivot Dieudonné
//! reduction and torsion of free group homomorphisms and presentations.
//!
//! Convention: `A_i` is the `d_i × d_{i-1}` matrix of `∂_i`, rows indexing the
//! basis of `C_i`, so `A_i · A_{i-1} = 0`. Torsion is multiplicative with
//! `B_i` entering with exponent `(-1)^i`; the circle has torsion `(t-1)^{-1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::{fox_derivative, fox_jacobian, FreeHom, Word};
use crate::groupring::{laurent_det, GRMatrix, GroupRingElt, LaurentFraction, LaurentPoly, Matrix, RingElement};
use crate::oracle::{abelian_cert, certify, Budget, Certificate, InvertVerdict};
use crate::polytope::{poly_of_elt, PolytopeDiff};
use crate::stallings;

/// `0 → C_n → ... → C_0 → 0` with chosen bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedComplex<R> {
    rank: usize,
    /// `d_n, ..., d_0`.
    dims: Vec<usize>,
    /// `A_n, ..., A_1`.
    boundaries: Vec<Matrix<R>>,
}

impl<R: RingElement> BasedComplex<R> {
    /// Checks counts, shapes and ring ranks (not `∂² = 0`; see [`Self::validate`]).
    pub fn new(rank: usize, dims: Vec<usize>, boundaries: Vec<Matrix<R>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Schema("a complex needs at least one chain module".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::Schema(format!("{} dims need {} boundary matrices, got {}", dims.len(), dims.len() - 1, boundaries.len())));
        }
        let n = dims.len() - 1;
        for (k, a) in boundaries.iter().enumerate() {
            let degree = n - k;
            if a.rank() != rank {
                return Err(Error::RankMismatch { expected: rank, found: a.rank() });
            }
            if a.rows() != dims[k] || a.cols() != dims[k + 1] {
                return Err(Error::InvalidComplex {
                    degree,
                    reason: format!("boundary is {}x{}, expected {}x{}", a.rows(), a.cols(), dims[k], dims[k + 1]),
                });
            }
        }
        Ok(BasedComplex { rank, dims, boundaries })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Top degree `n`.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_i`.
    pub fn dim(&self, i: usize) -> usize {
        self.dims[self.top() - i]
    }

    pub fn boundaries_top_down(&self) -> &[Matrix<R>] {
        &self.boundaries
    }

    /// `A_i` for `1 ≤ i ≤ n`.
    pub fn boundary(&self, i: usize) -> &Matrix<R> {
        &self.boundaries[self.top() - i]
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.top()).map(|i| if i % 2 == 0 { self.dim(i) as i64 } else { -(self.dim(i) as i64) }).sum()
    }

    /// `∂² = 0`; reports the first failing degree from the top.
    pub fn validate(&self) -> Result<()> {
        for i in (2..=self.top()).rev() {
            let prod = self.boundary(i).mul(self.boundary(i - 1))?;
            if !prod.is_zero() {
                return Err(Error::InvalidComplex { degree: i, reason: format!("A_{i} A_{} is nonzero", i - 1) });
            }
        }
        Ok(())
    }

    pub fn abelianize(&self) -> BasedComplex<LaurentPoly> {
        BasedComplex { rank: self.rank, dims: self.dims.clone(), boundaries: self.boundaries.iter().map(Matrix::abelianize).collect() }
    }
}

/// Index sets `I_n = ∅, ..., I_0` (zero-based) and the square matrices `B_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixChain<R> {
    /// `sets[i] = I_i`.
    pub sets: Vec<Vec<usize>>,
    /// `(i, B_i, certificate)` for `i = n, ..., 1`.
    pub blocks: Vec<(usize, Matrix<R>, Certificate)>,
}

/// Why a torsion value is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroReason {
    /// Nonzero Euler characteristic, or a row count exceeding the next rank.
    EulerCharacteristic,
    /// No candidate at `degree` was certified; `exact` when every candidate
    /// was certified singular.
    NoCertifiedChain { degree: usize, exact: bool },
    /// Exact decision that the Fox Jacobian is not a weak isomorphism.
    NotWeakIsomorphism,
    RankMismatch,
}

impl ZeroReason {
    /// `true` when the zero verdict is a proof rather than a failure to
    /// certify.
    pub fn is_exact(&self) -> bool {
        !matches!(self, ZeroReason::NoCertifiedChain { exact: false, .. })
    }
}

/// How a factor was shown to be invertible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Certified { certificate: Certificate },
    ExactHomDecision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor<R> {
    pub degree: usize,
    pub matrix: Matrix<R>,
    pub exponent: i8,
    pub evidence: Evidence,
}

/// `sign · numerator · denominator^{-1}`, a representative in the abelianized
/// unit group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementRep<R> {
    pub numerator: R,
    pub denominator: R,
    pub sign: i8,
}

impl<R: RingElement> ElementRep<R> {
    pub fn is_trivial_unit(&self) -> bool {
        self.numerator.unit_inverse().is_some() && self.denominator.unit_inverse().is_some()
    }

    /// The representative as a single ring element, when the denominator is a
    /// trivial unit.
    pub fn as_element(&self) -> Option<R> {
        let inv = self.denominator.unit_inverse()?;
        let e = self.numerator.mul(&inv);
        Some(if self.sign < 0 { e.neg() } else { e })
    }

    pub fn abelianize(&self) -> Result<LaurentFraction> {
        let num = self.numerator.abelianize();
        let num = if self.sign < 0 { num.neg() } else { num };
        LaurentFraction::new(num, self.denominator.abelianize())
    }

    pub fn polytope(&self) -> Result<PolytopeDiff> {
        PolytopeDiff::new(poly_of_elt(&self.numerator)?, poly_of_elt(&self.denominator)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Invariants<R> {
    pub element_rep: Option<ElementRep<R>>,
    pub abelian_det: Option<LaurentFraction>,
    pub polytope: Option<PolytopeDiff>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalProduct<R> {
    pub factors: Vec<Factor<R>>,
    pub invariants: Invariants<R>,
}

/// A universal torsion value: zero, or an alternating product of matrices
/// certified invertible, with whatever invariants could be computed.
#[derive(Debug, Clone, PartialEq)]
pub enum TorsionValue<R> {
    Zero(ZeroReason),
    Product(FormalProduct<R>),
}

impl<R: RingElement> TorsionValue<R> {
    pub fn is_zero(&self) -> bool {
        matches!(self, TorsionValue::Zero(_))
    }

    pub fn product(&self) -> Option<&FormalProduct<R>> {
        match self {
            TorsionValue::Product(p) => Some(p),
            TorsionValue::Zero(_) => None,
        }
    }

    pub fn element_rep(&self) -> Option<&ElementRep<R>> {
        self.product()?.invariants.element_rep.as_ref()
    }

    pub fn abelian_det(&self) -> Option<&LaurentFraction> {
        self.product()?.invariants.abelian_det.as_ref()
    }

    pub fn polytope(&self) -> Option<&PolytopeDiff> {
        self.product()?.invariants.polytope.as_ref()
    }

    /// Builds the value from factors, filling every invariant that can be
    /// computed.
    pub fn from_factors(factors: Vec<Factor<R>>) -> Result<Self> {
        let invariants = compute_invariants(&factors)?;
        Ok(TorsionValue::Product(FormalProduct { factors, invariants }))
    }
}

fn compute_invariants<R: RingElement>(factors: &[Factor<R>]) -> Result<Invariants<R>> {
    let rank = factors.first().map_or(0, |f| f.matrix.rank());
    let one = LaurentFraction::one(rank);
    let mut abelian = Some(one);
    for f in factors {
        let d = laurent_det(&f.matrix.abelianize())?;
        abelian = match (abelian, d.is_zero()) {
            (Some(acc), false) => {
                let d = LaurentFraction::from_poly(d);
                Some(if f.exponent > 0 { acc.mul(&d) } else { acc.div(&d)? })
            }
            _ => None,
        };
    }

    let mut num = R::one(rank);
    let mut den = R::one(rank);
    let mut sign = 1i8;
    let mut reduced = true;
    for f in factors {
        match unit_pivot_reduce(&f.matrix)? {
            Some((e, s)) if !e.is_zero() => {
                sign *= s;
                if f.exponent > 0 {
                    num = num.mul(&e);
                } else {
                    den = den.mul(&e);
                }
            }
            _ => {
                reduced = false;
                break;
            }
        }
    }
    let element_rep = reduced.then(|| simplify(ElementRep { numerator: num, denominator: den, sign }));
    let polytope = match &element_rep {
        Some(rep) if rank > 0 => Some(rep.polytope()?),
        _ => None,
    };
    Ok(Invariants { element_rep, abelian_det: abelian, polytope })
}

/// Cancels a numerator that is a trivial-unit multiple of the denominator,
/// and absorbs a trivial-unit denominator into the numerator.
fn simplify<R: RingElement>(mut rep: ElementRep<R>) -> ElementRep<R> {
    let rank = rep.numerator.rank();
    if let Some(u) = rep.numerator.left_unit_quotient(&rep.denominator) {
        rep.numerator = u;
        rep.denominator = R::one(rank);
    } else if let Some(inv) = rep.denominator.unit_inverse() {
        rep.numerator = rep.numerator.mul(&inv);
        rep.denominator = R::one(rank);
    }
    rep
}

enum Search<R> {
    Found(MatrixChain<R>),
    Zero(ZeroReason),
}

/// Finds a non-degenerate matrix chain by the top-down greedy choice of
/// certified invertible maximal square submatrices, backtracking over
/// column subsets within `budget.chain_calls` oracle calls per degree.
pub fn matrix_chain_search<R: RingElement>(c: &BasedComplex<R>, budget: &Budget) -> Result<Option<MatrixChain<R>>> {
    c.validate()?;
    match search(c, budget)? {
        Search::Found(chain) => Ok(Some(chain)),
        Search::Zero(_) => Ok(None),
    }
}

fn search<R: RingElement>(c: &BasedComplex<R>, budget: &Budget) -> Result<Search<R>> {
    if c.euler_characteristic() != 0 {
        return Ok(Search::Zero(ZeroReason::EulerCharacteristic));
    }
    let n = c.top();
    let mut sets = vec![Vec::new(); n + 1];
    let mut blocks = Vec::new();
    if n == 0 {
        return Ok(Search::Found(MatrixChain { sets, blocks }));
    }
    let mut calls = vec![0usize; n + 1];
    match descend(c, budget, n, &mut sets, &mut blocks, &mut calls)? {
        None => Ok(Search::Found(MatrixChain { sets, blocks })),
        Some(reason) => Ok(Search::Zero(reason)),
    }
}

/// Chooses `I_{i-1}` given `I_i`; `None` on success.
fn descend<R: RingElement>(
    c: &BasedComplex<R>,
    budget: &Budget,
    i: usize,
    sets: &mut Vec<Vec<usize>>,
    blocks: &mut Vec<(usize, Matrix<R>, Certificate)>,
    calls: &mut Vec<usize>,
) -> Result<Option<ZeroReason>> {
    if i == 0 {
        return Ok(None);
    }
    let a = c.boundary(i);
    let rows: Vec<usize> = (0..c.dim(i)).filter(|r| !sets[i].contains(r)).collect();
    let k = rows.len();
    let avail = c.dim(i - 1);
    if k > avail || (i == 1 && k != avail) {
        return Ok(Some(ZeroReason::EulerCharacteristic));
    }
    let mut fired = Vec::new();
    let mut pending = Vec::new();
    let mut all_singular = true;
    let mut exhausted = false;
    for cols in Combinations::new(avail, k) {
        if calls[i] >= budget.chain_calls {
            exhausted = true;
            break;
        }
        calls[i] += 1;
        let b = a.submatrix(&rows, &cols);
        if b.rows() == 0 || abelian_cert(&b)?.is_some() {
            fired.push((cols, b, Certificate::AbelianDet));
        } else {
            pending.push((cols, b));
        }
    }
    let mut deferred_exact = None;
    for (cols, b, cert) in fired {
        all_singular = false;
        match try_block(c, budget, i, sets, blocks, calls, cols, b, cert)? {
            None => return Ok(None),
            Some(reason) if reason.is_exact() => deferred_exact = Some(reason),
            Some(_) => {}
        }
        if deferred_exact.is_some() {
            return Ok(deferred_exact);
        }
    }
    for (cols, b) in pending {
        if calls[i] >= budget.chain_calls {
            exhausted = true;
            break;
        }
        calls[i] += 1;
        match certify(&b, budget) {
            InvertVerdict::CertifiedInvertible { certificate } => {
                all_singular = false;
                match try_block(c, budget, i, sets, blocks, calls, cols, b, certificate)? {
                    None => return Ok(None),
                    Some(reason) if reason.is_exact() => return Ok(Some(reason)),
                    Some(_) => {}
                }
            }
            InvertVerdict::CertifiedSingular { .. } => {}
            InvertVerdict::Undecided { .. } => all_singular = false,
        }
    }
    Ok(Some(ZeroReason::NoCertifiedChain { degree: i, exact: all_singular && !exhausted }))
}

#[allow(clippy::too_many_arguments)]
fn try_block<R: RingElement>(
    c: &BasedComplex<R>,
    budget: &Budget,
    i: usize,
    sets: &mut Vec<Vec<usize>>,
    blocks: &mut Vec<(usize, Matrix<R>, Certificate)>,
    calls: &mut Vec<usize>,
    cols: Vec<usize>,
    b: Matrix<R>,
    cert: Certificate,
) -> Result<Option<ZeroReason>> {
    sets[i - 1] = cols;
    blocks.push((i, b, cert));
    let below = descend(c, budget, i - 1, sets, blocks, calls)?;
    if below.is_some() {
        blocks.pop();
        sets[i - 1].clear();
    }
    Ok(below)
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, cur: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// `τ(C) = ∏ det(B_i)^{(-1)^i}` over a certified matrix chain, or zero.
pub fn torsion<R: RingElement>(c: &BasedComplex<R>, budget: &Budget) -> Result<TorsionValue<R>> {
    c.validate()?;
    match search(c, budget)? {
        Search::Zero(reason) => Ok(TorsionValue::Zero(reason)),
        Search::Found(chain) => {
            let factors = chain
                .blocks
                .into_iter()
                .filter(|(_, b, _)| b.rows() > 0)
                .map(|(i, b, certificate)| Factor {
                    degree: i,
                    matrix: b,
                    exponent: if i % 2 == 0 { 1 } else { -1 },
                    evidence: Evidence::Certified { certificate },
                })
                .collect();
            TorsionValue::from_factors(factors)
        }
    }
}

/// Dieudonné reduction by trivial-unit pivots, scanning row-major for the
/// first pivot. Returns `(e, s)` with `det = [s·e]`, or `None` when some
/// stage has no trivial-unit entry.
pub fn unit_pivot_reduce<R: RingElement>(m: &Matrix<R>) -> Result<Option<(R, i8)>> {
    reduce_with(m, |_| 0)
}

/// As [`unit_pivot_reduce`], choosing pivots in a seeded random order.
pub fn unit_pivot_reduce_shuffled<R: RingElement>(m: &Matrix<R>, seed: u64) -> Result<Option<(R, i8)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    reduce_with(m, move |n| {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        idx[0]
    })
}

fn reduce_with<R: RingElement>(m: &Matrix<R>, mut pick: impl FnMut(usize) -> usize) -> Result<Option<(R, i8)>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let rank = m.rank();
    if m.rows() == 0 {
        return Ok(Some((R::one(rank), 1)));
    }
    let mut a = m.to_rows();
    let mut units: Vec<R> = Vec::new();
    let mut sign = 1i8;
    while a.len() > 1 {
        let mut candidates = Vec::new();
        for (r, row) in a.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if let Some(inv) = e.unit_inverse() {
                    candidates.push((r, c, inv));
                }
            }
        }
        if candidates.is_empty() {
            return Ok(None);
        }
        let choice = pick(candidates.len());
        let (r, c, inv) = candidates.swap_remove(choice);
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].mul(&inv);
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
        if (r + c) % 2 == 1 {
            sign = -sign;
        }
        units.push(pivot_row[c].clone());
        a.remove(r);
        for row in a.iter_mut() {
            row.remove(c);
        }
    }
    let mut e = R::one(rank);
    for u in &units {
        e = e.mul(u);
    }
    Ok(Some((e.mul(&a[0][0]), sign)))
}

/// Decides `b = ±g·a·h` for words `g, h`, a sufficient condition for
/// `[a] = [b]` in the Whitehead group. The left factor is searched among
/// quotients `p·q^{-1}` of prefixes `p` of words of `b` and `q` of words of
/// `a`; the right factor is then forced by matching one term.
pub fn wh_element_equal(a: &GroupRingElt, b: &GroupRingElt) -> Result<bool> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch { expected: a.rank(), found: b.rank() });
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut coeffs_a: Vec<BigInt> = a.terms().map(|(_, c)| c.abs()).collect();
    let mut coeffs_b: Vec<BigInt> = b.terms().map(|(_, c)| c.abs()).collect();
    coeffs_a.sort();
    coeffs_b.sort();
    if coeffs_a != coeffs_b {
        return Ok(false);
    }
    let mut lefts = std::collections::BTreeSet::new();
    let a_prefixes: Vec<Word> = a.support().flat_map(Word::prefixes).collect();
    for v in b.support() {
        for p in v.prefixes() {
            for q in &a_prefixes {
                lefts.insert(p.mul_unchecked(&q.inverse()));
            }
        }
    }
    let (w0, _) = a.terms().next().expect("nonzero");
    for g in &lefts {
        let ga = a.left_mul_word(g);
        let gw0_inv = g.mul_unchecked(w0).inverse();
        for v in b.support() {
            let h = gw0_inv.mul_unchecked(v);
            let cand = ga.right_mul_word(&h);
            if cand == *b || cand.neg() == *b {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The dual complex: degree `k ↦ n − k`, boundaries replaced by involution
/// transposes.
pub fn dualize<R: RingElement>(c: &BasedComplex<R>) -> Result<BasedComplex<R>> {
    c.validate()?;
    let dims: Vec<usize> = c.dims.iter().rev().copied().collect();
    let boundaries: Vec<Matrix<R>> = c.boundaries.iter().rev().map(Matrix::involute_transpose).collect();
    let out = BasedComplex::new(c.rank, dims, boundaries)?;
    out.validate()?;
    Ok(out)
}

/// `0 → ZF^n --J_φ--> ZF^m → 0 → 0`, degrees 2, 1, 0.
pub fn mapping_cylinder_complex(phi: &FreeHom) -> BasedComplex<GroupRingElt> {
    let n = phi.domain_rank();
    let m = phi.codomain_rank();
    let j = fox_jacobian(phi);
    BasedComplex::new(m, vec![n, m, 0], vec![j, GRMatrix::zero(m, 0, m)]).expect("shapes chain by construction")
}

/// Basis of the free part of `H_1` of a presentation: rows are the images of
/// the generators in `Z^k`, where `k` is the rank of the free abelianization.
pub fn abelianization_projection(generators: usize, relators: &[Word]) -> Result<Vec<Vec<i64>>> {
    for r in relators {
        if r.rank() != generators {
            return Err(Error::RankMismatch { expected: generators, found: r.rank() });
        }
    }
    // exponent matrix, reduced by unimodular column operations mirrored in u
    let mut e: Vec<Vec<BigInt>> = relators.iter().map(|r| r.exponent_sums().into_iter().map(BigInt::from).collect()).collect();
    let m = generators;
    let mut u: Vec<Vec<BigInt>> = (0..m).map(|i| (0..m).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
    let col_op = |mat: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, f: &BigInt| {
        for row in mat.iter_mut() {
            let s = row[src].clone();
            row[dst] -= f * s;
        }
    };
    let swap_cols = |mat: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in mat.iter_mut() {
            row.swap(a, b);
        }
    };
    let mut lead = 0;
    for i in 0..e.len() {
        if lead == m {
            break;
        }
        loop {
            // smallest nonzero entry of row i in columns lead..m goes to lead
            let Some(p) = (lead..m).filter(|&j| !e[i][j].is_zero()).min_by_key(|&j| e[i][j].abs()) else {
                break;
            };
            swap_cols(&mut e, lead, p);
            swap_cols(&mut u, lead, p);
            let mut done = true;
            for j in lead + 1..m {
                if !e[i][j].is_zero() {
                    let f = e[i][j].div_floor(&e[i][lead]);
                    col_op(&mut e, j, lead, &f);
                    col_op(&mut u, j, lead, &f);
                    if !e[i][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                lead += 1;
                break;
            }
        }
    }
    let to_i64 = |x: &BigInt| -> Result<i64> { i64::try_from(x).map_err(|_| Error::InvariantUnavailable("projection entry overflows".into())) };
    let mut out = Vec::with_capacity(m);
    for row in &u {
        out.push(row[lead..].iter().map(to_i64).collect::<Result<Vec<i64>>>()?);
    }
    Ok(out)
}

/// Fox matrix `(∂r_i/∂y_j)` of the relators, an `r × m` matrix over `ZF_m`.
pub fn relator_fox_matrix(generators: usize, relators: &[Word]) -> Result<GRMatrix> {
    let mut entries = Vec::with_capacity(relators.len() * generators);
    for r in relators {
        for j in 1..=generators {
            entries.push(fox_derivative(r, j)?);
        }
    }
    GRMatrix::from_entries(relators.len(), generators, generators, entries)
}

/// The presentation 2-complex `0 → Λ^r → Λ^m → Λ → 0` over the Laurent ring
/// `Λ = Z[H_1(G)_f]` of the presented group: the Fox matrix of the relators,
/// then the column `(y_j − 1)`, pushed through the abelianization. With no
/// relators the degree-2 term is dropped.
pub fn presentation_complex(generators: usize, relators: &[Word]) -> Result<BasedComplex<LaurentPoly>> {
    let proj = abelianization_projection(generators, relators)?;
    let k = proj.first().map_or(0, Vec::len);
    let push = |a: &GroupRingElt| a.abelianize().substitute(&proj, k);
    let one = LaurentPoly::one(k);
    let col: Vec<LaurentPoly> = proj.iter().map(|row| LaurentPoly::monomial(k, row.clone(), 1).sub(&one)).collect();
    let a1 = Matrix::from_entries(generators, 1, k, col)?;
    if relators.is_empty() {
        return BasedComplex::new(k, vec![generators, 1], vec![a1]);
    }
    let fox = relator_fox_matrix(generators, relators)?;
    let a2 = fox.map(k, push);
    let c = BasedComplex::new(k, vec![relators.len(), generators, 1], vec![a2, a1])?;
    c.validate()?;
    Ok(c)
}

/// `τ(φ) = det_w(J_φ)` when `J_φ` is a weak isomorphism, zero otherwise.
///
/// The weak-isomorphism question is decided exactly through Stallings
/// graphs; when the graph exceeds the vertex cap the oracle is consulted.
pub fn torsion_of_hom(phi: &FreeHom, budget: &Budget) -> Result<TorsionValue<GroupRingElt>> {
    if phi.domain_rank() != phi.codomain_rank() {
        return Ok(TorsionValue::Zero(ZeroReason::RankMismatch));
    }
    let j = fox_jacobian(phi);
    let evidence = match stallings::decide_weak_iso(phi) {
        Ok(true) => Evidence::ExactHomDecision,
        Ok(false) => return Ok(TorsionValue::Zero(ZeroReason::NotWeakIsomorphism)),
        Err(Error::VertexCapExceeded { .. }) => match certify(&j, budget) {
            InvertVerdict::CertifiedInvertible { certificate } => Evidence::Certified { certificate },
            InvertVerdict::CertifiedSingular { .. } => return Ok(TorsionValue::Zero(ZeroReason::NotWeakIsomorphism)),
            InvertVerdict::Undecided { sizes_tried } => {
                return Err(Error::Undecided(format!(
                    "Stallings graph over the vertex cap and no certificate at sizes {sizes_tried:?}"
                )))
            }
        },
        Err(e) => return Err(e),
    };
    if phi.domain_rank() == 0 {
        return TorsionValue::from_factors(Vec::new());
    }
    TorsionValue::from_factors(vec![Factor { degree: 2, matrix: j, exponent: 1, evidence }])
}

/// Sign-insensitive equality of Laurent fractions up to `±t^v`.
pub fn abelian_eq(a: &LaurentFraction, b: &LaurentFraction) -> bool {
    a.eq_up_to_unit(b)
}

/// `true` iff the fraction is `±t^v`.
pub fn abelian_is_trivial(a: &LaurentFraction) -> bool {
    a.is_unit() || (a.numerator().len() == 1 && a.denominator().len() == 1 && {
        let c = a.numerator().terms().next().map(|(_, c)| c.abs()).unwrap_or_default();
        let d = a.denominator().terms().next().map(|(_, c)| c.abs()).unwrap_or_default();
        c == d && c.is_one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Alphabet;

    fn e(rank: usize, s: &str) -> GroupRingElt {
        GroupRingElt::parse(rank, s).unwrap()
    }

    fn lp(dim: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(dim, terms.iter().map(|(ex, c)| (ex.to_vec(), BigInt::from(*c))))
    }

    fn circle() -> BasedComplex<GroupRingElt> {
        BasedComplex::new(1, vec![1, 1], vec![GRMatrix::from_entries(1, 1, 1, vec![e(1, "x1 - 1")]).unwrap()]).unwrap()
    }

    fn torus() -> BasedComplex<LaurentPoly> {
        let a2 = Matrix::from_entries(1, 2, 2, vec![lp(2, &[(&[0, 0], 1), (&[0, 1], -1)]), lp(2, &[(&[1, 0], 1), (&[0, 0], -1)])]).unwrap();
        let a1 = Matrix::from_entries(2, 1, 2, vec![lp(2, &[(&[1, 0], 1), (&[0, 0], -1)]), lp(2, &[(&[0, 1], 1), (&[0, 0], -1)])]).unwrap();
        BasedComplex::new(2, vec![1, 2, 1], vec![a2, a1]).unwrap()
    }

    #[test]
    fn circle_torsion() {
        let c = circle();
        c.validate().unwrap();
        let chain = matrix_chain_search(&c, &Budget::default()).unwrap().unwrap();
        assert_eq!(chain.blocks[0].1, GRMatrix::from_entries(1, 1, 1, vec![e(1, "x1 - 1")]).unwrap());
        let tau = torsion(&c, &Budget::default()).unwrap();
        let p = tau.product().unwrap();
        assert_eq!(p.factors.len(), 1);
        assert_eq!(p.factors[0].exponent, -1);
        let expected = LaurentFraction::new(LaurentPoly::one(1), lp(1, &[(&[1], 1), (&[0], -1)])).unwrap();
        assert_eq!(*tau.abelian_det().unwrap(), expected);
    }

    #[test]
    fn torus_torsion_is_trivial() {
        let c = torus();
        c.validate().unwrap();
        let chain = matrix_chain_search(&c, &Budget::default()).unwrap().unwrap();
        assert_eq!(chain.sets[1], vec![0]);
        assert_eq!(*chain.blocks[0].1.get(0, 0), lp(2, &[(&[0, 0], 1), (&[0, 1], -1)]));
        assert_eq!(*chain.blocks[1].1.get(0, 0), lp(2, &[(&[0, 1], 1), (&[0, 0], -1)]));
        let tau = torsion(&c, &Budget::default()).unwrap();
        assert!(tau.abelian_det().unwrap().is_unit());
        assert!(tau.element_rep().unwrap().is_trivial_unit());
    }

    #[test]
    fn invalid_complex_reports_degree() {
        let a2 = GRMatrix::from_entries(1, 1, 1, vec![e(1, "x1")]).unwrap();
        let a1 = GRMatrix::from_entries(1, 1, 1, vec![e(1, "1")]).unwrap();
        let c = BasedComplex::new(1, vec![1, 1, 1], vec![a2, a1]).unwrap();
        assert!(matches!(c.validate(), Err(Error::InvalidComplex { degree: 2, .. })));
    }

    #[test]
    fn identity_cone() {
        let c = BasedComplex::new(2, vec![2, 2], vec![GRMatrix::identity(2, 2)]).unwrap();
        let chain = matrix_chain_search(&c, &Budget::default()).unwrap().unwrap();
        assert_eq!(chain.blocks[0].1, GRMatrix::identity(2, 2));
        let tau = torsion(&c, &Budget::default()).unwrap();
        assert!(tau.element_rep().unwrap().is_trivial_unit());
    }

    #[test]
    fn two_by_two_shape_reduction() {
        // [[1, -s1], [f1, f2]] with s1 = x1, f1 = x2, f2 = x3 reduces to f1 s1 + f2
        let m = GRMatrix::from_rows(3, 2, vec![vec![e(3, "1"), e(3, "-x1")], vec![e(3, "x2"), e(3, "x3")]]).unwrap();
        let (r, s) = unit_pivot_reduce(&m).unwrap().unwrap();
        assert_eq!(s, 1);
        assert_eq!(r, e(3, "x2 x1 + x3"));
    }

    #[test]
    fn permutation_matrix_reduces_to_signed_unit() {
        let m = GRMatrix::from_rows(
            2,
            3,
            vec![
                vec![GroupRingElt::zero(2), e(2, "x1"), GroupRingElt::zero(2)],
                vec![GroupRingElt::zero(2), GroupRingElt::zero(2), e(2, "x2")],
                vec![e(2, "1"), GroupRingElt::zero(2), GroupRingElt::zero(2)],
            ],
        )
        .unwrap();
        let (r, s) = unit_pivot_reduce(&m).unwrap().unwrap();
        assert!(r.is_trivial_unit().is_some());
        // a 3-cycle is even
        assert_eq!(s, 1);
    }

    #[test]
    fn no_unit_pivot() {
        let m = GRMatrix::from_rows(1, 2, vec![vec![e(1, "1 + x1"), e(1, "2")], vec![e(1, "2"), e(1, "1 - x1")]]).unwrap();
        assert_eq!(unit_pivot_reduce(&m).unwrap(), None);
        assert!(unit_pivot_reduce(&GRMatrix::zero(1, 2, 1)).is_err());
    }

    #[test]
    fn conjugation_aware_equality() {
        let a = e(2, "1 + x1 + x2");
        let x = Word::parse(2, "x1").unwrap();
        assert!(wh_element_equal(&a, &a.left_mul_word(&x).right_mul_word(&x.inverse())).unwrap());
        assert!(wh_element_equal(&a, &a.left_mul_word(&x).neg()).unwrap());
        assert!(!wh_element_equal(&e(1, "1 + x1"), &e(1, "1 + x1^2")).unwrap());
        assert!(wh_element_equal(&a, &GroupRingElt::zero(2)).is_err());
    }

    #[test]
    fn duals() {
        let c = circle();
        let d = dualize(&c).unwrap();
        assert_eq!(*d.boundary(1).get(0, 0), e(1, "x1^-1 - 1"));
        assert_eq!(dualize(&d).unwrap(), c);
    }

    #[test]
    fn presentations() {
        let alpha = Alphabet::default();
        let r = Word::parse_with(2, "a b a B A B", &alpha).unwrap();
        let c = presentation_complex(2, &[r]).unwrap();
        assert_eq!(c.rank(), 1);
        let tau = torsion(&c, &Budget::default()).unwrap();
        let num = lp(1, &[(&[2], 1), (&[1], -1), (&[0], 1)]);
        let den = lp(1, &[(&[1], 1), (&[0], -1)]);
        assert!(tau.abelian_det().unwrap().eq_up_to_unit(&LaurentFraction::new(num, den).unwrap()));

        let circle = presentation_complex(1, &[]).unwrap();
        assert_eq!(circle.dims(), &[1, 1]);
        assert_eq!(*circle.boundary(1).get(0, 0), lp(1, &[(&[1], 1), (&[0], -1)]));

        let comm = Word::parse_with(2, "a b A B", &alpha).unwrap();
        let t = presentation_complex(2, &[comm]).unwrap();
        assert_eq!(t, torus());
    }

    #[test]
    fn projection_kernel() {
        let r = Word::parse(3, "x1^2 x2^2").unwrap();
        let p = abelianization_projection(3, &[r]).unwrap();
        assert_eq!(p[0].len(), 2);
        // every relator maps to zero
        let v: Vec<i64> = (0..2).map(|j| 2 * p[0][j] + 2 * p[1][j]).collect();
        assert_eq!(v, vec![0, 0]);
    }
}
