use std::fmt;

use super::{GroupRingElt, LaurentPoly, RingElement};
use crate::error::{Error, Result};

/// Dense row-major matrix over a coefficient ring.
///
/// `rank` is the ring's rank (free-group rank or Laurent dimension); it is
/// carried separately so that empty matrices still know their ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    rank: usize,
    entries: Vec<R>,
}

pub type GRMatrix = Matrix<GroupRingElt>;
pub type LaurentMatrix = Matrix<LaurentPoly>;

impl<R: RingElement> Matrix<R> {
    pub fn zero(rows: usize, cols: usize, rank: usize) -> Self {
        Matrix { rows, cols, rank, entries: vec![R::zero(rank); rows * cols] }
    }

    pub fn identity(n: usize, rank: usize) -> Self {
        let mut m = Self::zero(n, n, rank);
        for i in 0..n {
            m.entries[i * n + i] = R::one(rank);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, rank: usize, entries: Vec<R>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(e) = entries.iter().find(|e| e.rank() != rank) {
            return Err(Error::RankMismatch { expected: rank, found: e.rank() });
        }
        Ok(Matrix { rows, cols, rank, entries })
    }

    /// Builds from nested rows; `cols` is needed only when `rows` is empty.
    pub fn from_rows(rank: usize, cols: usize, rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            entries.extend(row);
        }
        Self::from_entries(n, cols, rank, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        assert_eq!(value.rank(), self.rank, "entry rank differs from matrix rank");
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(R::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        let mut out = Self::zero(self.rows, other.cols, self.rank);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, rank: self.rank, entries })
    }

    pub fn map<S: RingElement>(&self, rank: usize, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, rank, entries: self.entries.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, rank: self.rank, entries }
    }

    /// The matrix `P^*`: transpose with every entry involuted.
    pub fn involute_transpose(&self) -> Self {
        let t = self.transpose();
        t.map(self.rank, R::involute)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: rows.len(), cols: cols.len(), rank: self.rank, entries }
    }

    pub fn abelianize(&self) -> LaurentMatrix {
        self.map(self.rank, R::abelianize)
    }

    /// `true` if some row or column is entirely zero.
    pub fn has_zero_line(&self) -> bool {
        let zero_row = (0..self.rows).any(|i| self.row(i).iter().all(R::is_zero));
        let zero_col = (0..self.cols).any(|j| (0..self.rows).all(|i| self.get(i, j).is_zero()));
        zero_row || zero_col
    }
}

impl GRMatrix {
    /// Applies a ring map entrywise (used for `ψ(J_φ)`).
    pub fn try_map(&self, rank: usize, f: impl Fn(&GroupRingElt) -> Result<GroupRingElt>) -> Result<GRMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Matrix::from_entries(self.rows, self.cols, rank, entries)
    }
}

impl<R: RingElement> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}
