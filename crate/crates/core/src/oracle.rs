//! Invertibility certificates for square matrices over group rings.
//!
//! Over a free group ring a certificate shows the matrix is full, hence
//! invertible over the skew field of fractions. Two sound certificates are
//! tried in order: a nonzero abelianized determinant, and full rank of the
//! image under a random representation `F → SL_d(Z)` reduced modulo a prime.
//! Over a Laurent ring the determinant decides invertibility exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupring::{laurent_det, Matrix, RingElement};

const PRIMES: [u64; 2] = [(1 << 61) - 1, (1 << 31) - 1];

/// Limits on certificate escalation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest representation degree tried.
    pub max_size: usize,
    pub seeds_per_size: usize,
    pub seed: u64,
    /// Oracle calls allowed per degree during matrix-chain search.
    pub chain_calls: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_size: 8, seeds_per_size: 3, seed: 0, chain_calls: 2000 }
    }
}

impl Budget {
    /// Representation degrees `1, 2, 4, ...` up to `max_size`.
    pub fn sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut d = 1;
        while d <= self.max_size {
            out.push(d);
            d *= 2;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    AbelianDet,
    RandomSubstitution { size: usize, seed: u64, prime: u64, substitution_hash: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularReason {
    NonSquare,
    ZeroRowOrColumn,
    ExactHomDecision,
    /// Commutative coefficient ring with vanishing determinant.
    ZeroDeterminant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InvertVerdict {
    CertifiedInvertible { certificate: Certificate },
    CertifiedSingular { reason: SingularReason },
    Undecided { sizes_tried: Vec<usize> },
}

impl InvertVerdict {
    pub fn is_invertible(&self) -> bool {
        matches!(self, InvertVerdict::CertifiedInvertible { .. })
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, InvertVerdict::CertifiedSingular { .. })
    }
}

fn require_square<R: RingElement>(m: &Matrix<R>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(())
}

/// Fires iff the abelianized determinant is nonzero.
pub fn abelian_cert<R: RingElement>(m: &Matrix<R>) -> Result<Option<Certificate>> {
    require_square(m)?;
    if m.has_zero_line() {
        return Ok(None);
    }
    let det = laurent_det(&m.abelianize())?;
    Ok((!det.is_zero()).then_some(Certificate::AbelianDet))
}

/// Fires iff the image of `m` under a random degree-`size` representation
/// has full rank modulo a prime.
pub fn random_matrix_cert<R: RingElement>(m: &Matrix<R>, size: usize, seed: u64) -> Result<Option<Certificate>> {
    require_square(m)?;
    if size == 0 {
        return Err(Error::DimensionMismatch("representation degree must be at least 1".into()));
    }
    if m.has_zero_line() {
        return Ok(None);
    }
    for &p in &PRIMES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<(ModMat, ModMat)> = (0..m.rank()).map(|_| random_generator::<R>(&mut rng, size, p)).collect();
        let n = m.rows();
        let big = evaluate(m, &gens, size, p);
        if rank_mod_p(big, p) == n * size {
            let hash = substitution_hash(&gens);
            return Ok(Some(Certificate::RandomSubstitution { size, seed, prime: p, substitution_hash: format!("{hash:016x}") }));
        }
    }
    Ok(None)
}

/// Seed of the `index`-th attempt at a given size.
pub fn derive_seed(base: u64, size: usize, index: usize) -> u64 {
    splitmix(base ^ splitmix((size as u64) << 32 | index as u64))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Escalating certification.
pub fn certify<R: RingElement>(m: &Matrix<R>, budget: &Budget) -> InvertVerdict {
    if !m.is_square() {
        return InvertVerdict::CertifiedSingular { reason: SingularReason::NonSquare };
    }
    if m.rows() == 0 {
        return InvertVerdict::CertifiedInvertible { certificate: Certificate::AbelianDet };
    }
    if m.has_zero_line() {
        return InvertVerdict::CertifiedSingular { reason: SingularReason::ZeroRowOrColumn };
    }
    match abelian_cert(m) {
        Ok(Some(certificate)) => return InvertVerdict::CertifiedInvertible { certificate },
        Ok(None) if R::COMMUTATIVE => return InvertVerdict::CertifiedSingular { reason: SingularReason::ZeroDeterminant },
        _ => {}
    }
    let sizes = budget.sizes();
    for &size in &sizes {
        for k in 0..budget.seeds_per_size {
            let seed = derive_seed(budget.seed, size, k);
            if let Ok(Some(certificate)) = random_matrix_cert(m, size, seed) {
                return InvertVerdict::CertifiedInvertible { certificate };
            }
        }
    }
    InvertVerdict::Undecided { sizes_tried: sizes }
}

type ModMat = Vec<Vec<u64>>;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn reduce_int(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn reduce_i64(c: i64, p: u64) -> u64 {
    c.rem_euclid(p as i64) as u64
}

fn identity(d: usize) -> ModMat {
    (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &ModMat, b: &ModMat, p: u64) -> ModMat {
    let d = a.len();
    let mut out = vec![vec![0u64; d]; d];
    for i in 0..d {
        for k in 0..d {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..d {
                out[i][j] = add_mod(out[i][j], mul_mod(x, b[k][j], p), p);
            }
        }
    }
    out
}

/// A random element of `GL_d(Z)` as a signed product of elementary
/// matrices, with its inverse, both reduced mod `p`. Commutative rings get
/// scalar matrices so that the substitution is a ring map.
fn random_generator<R: RingElement>(rng: &mut ChaCha8Rng, d: usize, p: u64) -> (ModMat, ModMat) {
    if R::COMMUTATIVE || d == 1 {
        let mut g = identity(d);
        let mut inv = identity(d);
        let s: i64 = if R::COMMUTATIVE && d > 1 { rng.gen_range(2..1000) } else if rng.gen_bool(0.5) { 1 } else { -1 };
        let sv = reduce_i64(s, p);
        let sinv = pow_mod(sv, p - 2, p);
        for i in 0..d {
            g[i][i] = sv;
            inv[i][i] = sinv;
        }
        return (g, inv);
    }
    let mut g = identity(d);
    let mut inv = identity(d);
    for i in 0..d {
        if rng.gen_bool(0.5) {
            g[i][i] = p - 1;
            inv[i][i] = p - 1;
        }
    }
    for _ in 0..3 * d {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let mut c: i64 = rng.gen_range(1..=3);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let cv = reduce_i64(c, p);
        // g ← g·(I + c e_ij): column j += c·column i
        for row in g.iter_mut() {
            row[j] = add_mod(row[j], mul_mod(cv, row[i], p), p);
        }
        // inv ← (I − c e_ij)·inv: row i −= c·row j
        let rj = inv[j].clone();
        for (x, y) in inv[i].iter_mut().zip(&rj) {
            *x = sub_mod(*x, mul_mod(cv, *y, p), p);
        }
    }
    (g, inv)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn evaluate<R: RingElement>(m: &Matrix<R>, gens: &[(ModMat, ModMat)], d: usize, p: u64) -> ModMat {
    let n = m.rows();
    let mut big = vec![vec![0u64; n * d]; n * d];
    for i in 0..n {
        for j in 0..n {
            for (syllables, c) in m.get(i, j).syllable_terms() {
                let mut acc = identity(d);
                for (g, e) in syllables {
                    let base = if e > 0 { &gens[g - 1].0 } else { &gens[g - 1].1 };
                    for _ in 0..e.unsigned_abs() {
                        acc = mat_mul(&acc, base, p);
                    }
                }
                let cv = reduce_int(&c, p);
                for a in 0..d {
                    for b in 0..d {
                        let cell = &mut big[i * d + a][j * d + b];
                        *cell = add_mod(*cell, mul_mod(cv, acc[a][b], p), p);
                    }
                }
            }
        }
    }
    big
}

fn rank_mod_p(mut a: ModMat, p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for x in a[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let prow = a[rank].clone();
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for (x, y) in a[r].iter_mut().zip(&prow) {
                    *x = sub_mod(*x, mul_mod(f, *y, p), p);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// FNV-1a over the substituted generator matrices.
fn substitution_hash(gens: &[(ModMat, ModMat)]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for (g, _) in gens {
        for x in g.iter().flatten() {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{GRMatrix, GroupRingElt};

    fn m(rank: usize, rows: &[&[&str]]) -> GRMatrix {
        let cols = rows[0].len();
        let rows = rows.iter().map(|r| r.iter().map(|s| GroupRingElt::parse(rank, s).unwrap()).collect()).collect();
        GRMatrix::from_rows(rank, cols, rows).unwrap()
    }

    #[test]
    fn abelian_certificate() {
        assert_eq!(abelian_cert(&m(1, &[&["x1 - 1"]])).unwrap(), Some(Certificate::AbelianDet));
        assert_eq!(abelian_cert(&m(2, &[&["x1", "1"], &["x1 x2", "x2"]])).unwrap(), None);
        assert_eq!(abelian_cert(&m(1, &[&["0", "1"], &["0", "x1"]])).unwrap(), None);
        assert!(abelian_cert(&GRMatrix::zero(1, 2, 1)).is_err());
    }

    #[test]
    fn random_certificate_sees_noncommutative_determinant() {
        let a = m(2, &[&["x1", "1"], &["x1 x2", "x2"]]);
        let fired = (0..3).filter(|&k| random_matrix_cert(&a, 2, derive_seed(7, 2, k)).unwrap().is_some()).count();
        assert!(fired >= 2);
        assert!(random_matrix_cert(&m(1, &[&["0"]]), 4, 1).unwrap().is_none());
        assert!(random_matrix_cert(&a, 0, 1).is_err());
    }

    #[test]
    fn escalation() {
        assert!(certify(&m(1, &[&["2"]]), &Budget::default()).is_invertible());
        assert_eq!(
            certify(&GRMatrix::zero(2, 3, 1), &Budget::default()),
            InvertVerdict::CertifiedSingular { reason: SingularReason::NonSquare }
        );
        let v = certify(&m(2, &[&["x1", "1"], &["x1 x2", "x2"]]), &Budget::default());
        assert!(matches!(v, InvertVerdict::CertifiedInvertible { certificate: Certificate::RandomSubstitution { .. } }));
        assert_eq!(v, certify(&m(2, &[&["x1", "1"], &["x1 x2", "x2"]]), &Budget::default()));
    }

    #[test]
    fn dependent_rows_never_certify() {
        // second row = (1 + x2)·first row
        let a = m(2, &[&["x1", "1 - x2"], &["x1 + x2 x1", "1 - x2 x2"]]);
        assert_eq!(abelian_cert(&a).unwrap(), None);
        for size in [1, 2, 4, 8] {
            for k in 0..3 {
                assert!(random_matrix_cert(&a, size, derive_seed(1, size, k)).unwrap().is_none());
            }
        }
    }
}
