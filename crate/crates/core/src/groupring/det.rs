use std::collections::HashMap;

use super::{LaurentMatrix, LaurentPoly};
use crate::error::{Error, Result};

/// Above this size the subset expansion is replaced by Bareiss elimination.
const EXPANSION_LIMIT: usize = 10;

/// Determinant of a square Laurent matrix.
pub fn laurent_det(m: &LaurentMatrix) -> Result<LaurentPoly> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.rows() <= EXPANSION_LIMIT {
        laurent_det_expansion(m)
    } else {
        laurent_det_bareiss(m)
    }
}

/// Division-free Laplace expansion along rows, memoized on the set of used
/// columns: `O(2^n n)` ring operations.
pub fn laurent_det_expansion(m: &LaurentMatrix) -> Result<LaurentPoly> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let dim = m.rank();
    if n == 0 {
        return Ok(LaurentPoly::one(dim));
    }
    if n > 24 {
        return Err(Error::DimensionMismatch(format!("{n}x{n} is too large for subset expansion")));
    }
    // layer[mask] = det of the minor on the first popcount(mask) rows and the columns in mask
    let mut layer: HashMap<u32, LaurentPoly> = HashMap::new();
    layer.insert(0, LaurentPoly::one(dim));
    for i in 0..n {
        let mut next: HashMap<u32, LaurentPoly> = HashMap::new();
        for (mask, val) in &layer {
            if val.is_zero() {
                continue;
            }
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let a = m.get(i, j);
                if a.is_zero() {
                    continue;
                }
                // sign of moving column j past the used columns to its right
                let above = (mask >> j).count_ones();
                let term = val.mul(a);
                let term = if above % 2 == 1 { term.neg() } else { term };
                let slot = next.entry(mask | (1 << j)).or_insert_with(|| LaurentPoly::zero(dim));
                *slot = slot.add(&term);
            }
        }
        layer = next;
    }
    Ok(layer.remove(&((1u32 << n) - 1)).unwrap_or_else(|| LaurentPoly::zero(dim)))
}

/// Fraction-free Bareiss elimination with exact Laurent division.
pub fn laurent_det_bareiss(m: &LaurentMatrix) -> Result<LaurentPoly> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let dim = m.rank();
    let mut a = m.to_rows();
    let mut prev = LaurentPoly::one(dim);
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].len()) else {
            return Ok(LaurentPoly::zero(dim));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).ok_or_else(|| {
                    Error::InvariantUnavailable("Bareiss step produced an inexact division".into())
                })?;
            }
            a[i][k] = LaurentPoly::zero(dim);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn lp(dim: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn two_by_two() {
        let t = lp(1, &[(&[1], 1)]);
        let one = LaurentPoly::one(1);
        let m = LaurentMatrix::from_rows(1, 2, vec![vec![t.clone(), one.clone()], vec![one.clone(), t.clone()]]).unwrap();
        let expected = t.mul(&t).sub(&one);
        assert_eq!(laurent_det_expansion(&m).unwrap(), expected);
        assert_eq!(laurent_det_bareiss(&m).unwrap(), expected);
    }

    #[test]
    fn methods_agree_on_structured_matrix() {
        // tridiagonal with t, 1+s, t^-1 s
        let n = 6;
        let dim = 2;
        let mut m = LaurentMatrix::zero(n, n, dim);
        for i in 0..n {
            m.set(i, i, lp(dim, &[(&[0, 1], 1), (&[0, 0], 1)]));
            if i + 1 < n {
                m.set(i, i + 1, lp(dim, &[(&[1, 0], 1)]));
                m.set(i + 1, i, lp(dim, &[(&[-1, 1], -2)]));
            }
        }
        m.set(0, n - 1, lp(dim, &[(&[2, -1], 3)]));
        assert_eq!(laurent_det_expansion(&m).unwrap(), laurent_det_bareiss(&m).unwrap());
    }

    #[test]
    fn singular_and_empty() {
        let z = LaurentMatrix::zero(3, 3, 1);
        assert!(laurent_det(&z).unwrap().is_zero());
        assert!(laurent_det_bareiss(&z).unwrap().is_zero());
        assert_eq!(laurent_det(&LaurentMatrix::zero(0, 0, 1)).unwrap(), LaurentPoly::one(1));
        assert!(laurent_det(&LaurentMatrix::zero(2, 3, 1)).is_err());
    }
}
