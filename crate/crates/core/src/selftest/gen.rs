//! Random instances with independently known answers.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::complex::BasedComplex;
use crate::freegroup::{FreeHom, Word};
use crate::groupring::{GroupRingElt, LaurentFraction, LaurentMatrix, LaurentPoly, Matrix};
use crate::leading::Character;
use crate::restriction::FiniteQuotientSpec;

pub fn word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<(usize, i8)> = (0..len).map(|_| (rng.gen_range(1..=rank), if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    Word::reduce(rank, &letters).expect("letters in range")
}

pub fn nontrivial_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    loop {
        let w = word(rng, rank, max_len.max(1));
        if !w.is_identity() {
            return w;
        }
    }
}

pub fn element(rng: &mut ChaCha8Rng, rank: usize, terms: usize, max_len: usize) -> GroupRingElt {
    let n = rng.gen_range(1..=terms);
    let ts: Vec<(Word, BigInt)> = (0..n).map(|_| (word(rng, rank, max_len), BigInt::from(coeff(rng)))).collect();
    GroupRingElt::from_terms(rank, ts)
}

pub fn nonzero_element(rng: &mut ChaCha8Rng, rank: usize, terms: usize, max_len: usize) -> GroupRingElt {
    loop {
        let a = element(rng, rank, terms, max_len);
        if !a.is_zero() {
            return a;
        }
    }
}

fn coeff(rng: &mut ChaCha8Rng) -> i64 {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

/// `±g`.
pub fn trivial_unit(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> GroupRingElt {
    GroupRingElt::monomial(if rng.gen_bool(0.5) { 1 } else { -1 }, word(rng, rank, max_len))
}

/// A nonzero rational character with small numerators and denominators.
pub fn character(rng: &mut ChaCha8Rng, dim: usize) -> Character {
    loop {
        let values: Vec<BigRational> =
            (0..dim).map(|_| BigRational::new(BigInt::from(rng.gen_range(-3..=3)), BigInt::from(rng.gen_range(1..=2)))).collect();
        let phi = Character::new(values);
        if !phi.is_zero() {
            return phi;
        }
    }
}

pub fn hom(rng: &mut ChaCha8Rng, domain: usize, codomain: usize, max_len: usize) -> FreeHom {
    let images = (0..domain).map(|_| word(rng, codomain, max_len)).collect();
    FreeHom::new(domain, codomain, images).expect("ranks agree")
}

pub fn laurent(rng: &mut ChaCha8Rng, dim: usize, terms: usize, spread: i64) -> LaurentPoly {
    let n = rng.gen_range(1..=terms);
    LaurentPoly::from_terms(dim, (0..n).map(|_| ((0..dim).map(|_| rng.gen_range(-spread..=spread)).collect(), BigInt::from(coeff(rng)))))
}

pub fn laurent_monomial(rng: &mut ChaCha8Rng, dim: usize, spread: i64) -> LaurentPoly {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    LaurentPoly::monomial(dim, (0..dim).map(|_| rng.gen_range(-spread..=spread)).collect(), sign)
}

/// A based Laurent complex with its torsion known by construction.
pub struct KnownComplex {
    pub complex: BasedComplex<LaurentPoly>,
    /// `None` when the complex is not acyclic.
    pub torsion: Option<LaurentFraction>,
}

/// Direct sum of elementary pieces `0 → R --p--> R → 0` sitting in degrees
/// `(i, i−1)`, followed by random based changes of basis. Each piece
/// contributes `p^{(−1)^i}`; elementary changes leave the torsion alone and
/// monomial rescalings change it by units. With `allow_zero` some pieces
/// have `p = 0`, so the complex is not acyclic.
pub fn known_complex(rng: &mut ChaCha8Rng, dim: usize, allow_zero: bool) -> KnownComplex {
    let top = rng.gen_range(1..=3usize);
    let pieces_n = rng.gen_range(1..=3usize);
    let mut dims = vec![0usize; top + 1];
    let mut pieces = Vec::new();
    for _ in 0..pieces_n {
        let i = rng.gen_range(1..=top);
        let p = if allow_zero && rng.gen_bool(0.15) { LaurentPoly::zero(dim) } else { nonzero_laurent(rng, dim) };
        pieces.push((i, dims[i], dims[i - 1], p));
        dims[i] += 1;
        dims[i - 1] += 1;
    }
    // extra empty degrees are fine: dims may contain zeros
    let mut bounds: Vec<LaurentMatrix> = (1..=top).map(|i| Matrix::zero(dims[i], dims[i - 1], dim)).collect();
    let mut torsion = Some(LaurentFraction::one(dim));
    for (i, r, c, p) in pieces {
        bounds[i - 1].set(r, c, p.clone());
        torsion = match torsion {
            Some(t) if !p.is_zero() => {
                let f = LaurentFraction::from_poly(p);
                Some(if i % 2 == 0 { t.mul(&f) } else { t.div(&f).expect("nonzero") })
            }
            _ => None,
        };
    }
    for _ in 0..rng.gen_range(0..=4) {
        let k = rng.gen_range(0..=top);
        let d = dims[k];
        if d == 0 {
            continue;
        }
        let (e, e_inv) = if d >= 2 && rng.gen_bool(0.7) {
            let a = rng.gen_range(0..d);
            let mut b = rng.gen_range(0..d - 1);
            if b >= a {
                b += 1;
            }
            let c = laurent(rng, dim, 2, 1);
            let mut e = Matrix::identity(d, dim);
            let mut ei = Matrix::identity(d, dim);
            e.set(a, b, c.clone());
            ei.set(a, b, c.neg());
            (e, ei)
        } else {
            let a = rng.gen_range(0..d);
            let u = laurent_monomial(rng, dim, 1);
            let ui = u.monomial_unit_inverse().expect("monomial");
            let mut e = Matrix::identity(d, dim);
            let mut ei = Matrix::identity(d, dim);
            e.set(a, a, u.clone());
            ei.set(a, a, ui);
            if let Some(t) = torsion.as_mut() {
                // a rescaling of C_k multiplies the torsion by a unit
                let f = LaurentFraction::from_poly(u);
                *t = if k % 2 == 0 { t.mul(&f) } else { t.div(&f).expect("unit") };
            }
            (e, ei)
        };
        // rows are the domain basis: new A_k = E A_k, new A_{k+1} = A_{k+1} E^{-1}
        if k >= 1 {
            bounds[k - 1] = e.mul(&bounds[k - 1]).expect("shapes");
        }
        if k < top {
            bounds[k] = bounds[k].mul(&e_inv).expect("shapes");
        }
    }
    let dims_top_down: Vec<usize> = dims.iter().rev().copied().collect();
    let bounds_top_down: Vec<LaurentMatrix> = bounds.into_iter().rev().collect();
    let complex = BasedComplex::new(dim, dims_top_down, bounds_top_down).expect("shapes by construction");
    KnownComplex { complex, torsion }
}

fn nonzero_laurent(rng: &mut ChaCha8Rng, dim: usize) -> LaurentPoly {
    loop {
        let p = laurent(rng, dim, 3, 1);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Regular permutation representation of a random group of order at most 4
/// (or of `S_3`), with random generator images generating the whole group.
pub fn quotient_spec(rng: &mut ChaCha8Rng, rank: usize) -> FiniteQuotientSpec {
    let tables: Vec<Vec<Vec<usize>>> = vec![cyclic_table(2), cyclic_table(3), cyclic_table(4), klein_table(), s3_table()];
    loop {
        let table = tables.choose(rng).expect("nonempty");
        let n = table.len();
        let images: Vec<usize> = (0..rank).map(|_| rng.gen_range(0..n)).collect();
        if !generates(table, &images) {
            continue;
        }
        // right regular action: coset k maps to k·g
        let perms = images.iter().map(|&g| (0..n).map(|k| table[k][g] + 1).collect()).collect();
        return FiniteQuotientSpec::new(rank, n, perms).expect("regular action");
    }
}

fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

fn klein_table() -> Vec<Vec<usize>> {
    (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()
}

fn s3_table() -> Vec<Vec<usize>> {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
    perms.iter().map(|a| perms.iter().map(|b| idx([b[a[0]], b[a[1]], b[a[2]]])).collect()).collect()
}

fn generates(table: &[Vec<usize>], gens: &[usize]) -> bool {
    let mut seen = vec![false; table.len()];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(a) = stack.pop() {
        for &g in gens {
            let b = table[a][g];
            if !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Fox derivative straight from the defining rules, letter by letter on the
/// unreduced letter sequence.
pub fn naive_fox(rank: usize, letters: &[(usize, i8)], j: usize) -> GroupRingElt {
    let mut acc = GroupRingElt::zero(rank);
    let mut prefix: Vec<(usize, i8)> = Vec::new();
    for &(g, s) in letters {
        if g == j {
            let p = Word::reduce(rank, &prefix).expect("in range");
            if s > 0 {
                acc = acc.add(&GroupRingElt::from_word(p));
            } else {
                let mut q = prefix.clone();
                q.push((g, -1));
                acc = acc.sub(&GroupRingElt::from_word(Word::reduce(rank, &q).expect("in range")));
            }
        }
        prefix.push((g, s));
    }
    acc
}

/// Raw letter sequence, possibly unreduced.
pub fn letters(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Vec<(usize, i8)> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| (rng.gen_range(1..=rank), if rng.gen_bool(0.5) { 1 } else { -1 })).collect()
}

/// Every reduced word of length `1..=max_len` over `rank` generators.
pub fn all_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<(usize, i8)>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 1..=rank {
                for s in [1i8, -1] {
                    if let Some(&(h, t)) = w.last() {
                        if h == g && t == -s {
                            continue;
                        }
                    }
                    let mut v = w.clone();
                    v.push((g, s));
                    out.push(Word::reduce(rank, &v).expect("in range"));
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    out
}

/// A hom with a kernel element of length at most 6.
pub fn short_kernel_hom(rng: &mut ChaCha8Rng) -> FreeHom {
    let domain = rng.gen_range(2..=3);
    let codomain = rng.gen_range(1..=3);
    let mut images: Vec<Word> = (0..domain).map(|_| word(rng, codomain, 4)).collect();
    match rng.gen_range(0..3) {
        0 => images[1] = images[0].clone(),
        1 => images[rng.gen_range(0..domain)] = Word::identity(codomain),
        _ => {
            let u = nontrivial_word(rng, codomain, 2);
            let a = rng.gen_range(1..=3i64);
            let b = rng.gen_range(1..=(6 - a).min(3));
            images[0] = u.pow(a);
            images[1] = u.pow(if rng.gen_bool(0.5) { b } else { -b });
        }
    }
    FreeHom::new(domain, codomain, images).expect("ranks agree")
}
