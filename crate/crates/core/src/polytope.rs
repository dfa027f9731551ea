//! Integral polytopes in `H_1`, Minkowski arithmetic, formal differences and
//! their translation quotient, and the polytope map on ring elements.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::complex::TorsionValue;
use crate::error::{Error, Result};
use crate::groupring::RingElement;
use crate::leading::Character;

/// Largest ambient dimension the hull routine accepts.
pub const MAX_DIM: usize = 8;

/// Convex hull of finitely many points of `Z^dim`, stored by its vertices in
/// lexicographic order. No vertices means the empty polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

impl IntPolytope {
    pub fn empty(dim: usize) -> Self {
        IntPolytope { dim, vertices: Vec::new() }
    }

    pub fn point(p: Vec<i64>) -> Self {
        IntPolytope { dim: p.len(), vertices: vec![p] }
    }

    pub fn origin(dim: usize) -> Self {
        Self::point(vec![0; dim])
    }

    /// The standard simplex `conv{0, e_1, ..., e_dim}`.
    pub fn standard_simplex(dim: usize) -> Self {
        let mut vertices = vec![vec![0; dim]];
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 1;
            vertices.push(e);
        }
        vertices.sort();
        IntPolytope { dim, vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    fn nonempty(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Ok(())
    }

    pub fn lex_min_vertex(&self) -> Option<&Vec<i64>> {
        self.vertices.first()
    }

    pub fn translate(&self, v: &[i64]) -> Self {
        let mut vertices: Vec<Vec<i64>> = self.vertices.iter().map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect()).collect();
        vertices.sort();
        IntPolytope { dim: self.dim, vertices }
    }

    /// `k·P` for `k ≥ 0`.
    pub fn scale(&self, k: i64) -> Self {
        assert!(k >= 0, "negative scaling of a polytope");
        if k == 0 {
            return if self.is_empty() { self.clone() } else { Self::origin(self.dim) };
        }
        IntPolytope { dim: self.dim, vertices: self.vertices.iter().map(|p| p.iter().map(|x| x * k).collect()).collect() }
    }

    /// `true` iff `p` lies in the polytope (exact).
    pub fn contains(&self, p: &[i64]) -> bool {
        !self.is_empty() && in_hull(&self.vertices, p)
    }
}

impl IntPolytope {
    /// Image under the integer linear map with the given rows.
    pub fn linear_image(&self, rows: &[Vec<i64>]) -> Result<IntPolytope> {
        if rows.iter().any(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch(format!("linear map rows must have length {}", self.dim)));
        }
        let pts: Vec<Vec<i64>> =
            self.vertices.iter().map(|v| rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()).collect();
        hull(rows.len(), &pts)
    }
}

impl fmt::Display for IntPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:?}")?;
        }
        write!(f, "}}")
    }
}

/// Extreme points of the given point set; an empty input gives the empty
/// polytope.
pub fn hull(dim: usize, points: &[Vec<i64>]) -> Result<IntPolytope> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::DimensionMismatch(format!("polytope dimension {dim} outside 1..={MAX_DIM}")));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch(format!("point of dimension {} in Z^{dim}", p.len())));
    }
    let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if pts.len() <= 2 {
        return Ok(IntPolytope { dim, vertices: pts });
    }
    let known = direction_extremes(dim, &pts);
    let mut vertices = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        // lex-extreme points are always vertices
        if i == 0 || i == pts.len() - 1 || known.contains(p) {
            vertices.push(p.clone());
            continue;
        }
        // a point inside the hull of known vertices is not a vertex; this
        // small program settles most candidates
        if in_hull(&known.iter().cloned().collect::<Vec<_>>(), p) {
            continue;
        }
        let others: Vec<Vec<i64>> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
        if !in_hull(&others, p) {
            vertices.push(p.clone());
        }
    }
    Ok(IntPolytope { dim, vertices })
}

/// Points maximizing a sample of linear functionals, ties broken by the
/// lexicographically largest point; each is a vertex.
fn direction_extremes(dim: usize, pts: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    if pts.len() <= 8 {
        return out;
    }
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 19) as i64 - 9
    };
    let rounds = 16 * dim + 4 * pts.len().min(64);
    for k in 0..rounds {
        let dir: Vec<i64> = if k < 2 * dim {
            (0..dim).map(|i| if i == k / 2 { if k % 2 == 0 { 1 } else { -1 } } else { 0 }).collect()
        } else {
            (0..dim).map(|_| next()).collect()
        };
        let best = pts.iter().max_by(|a, b| {
            let va: i64 = a.iter().zip(&dir).map(|(x, y)| x * y).sum();
            let vb: i64 = b.iter().zip(&dir).map(|(x, y)| x * y).sum();
            va.cmp(&vb).then_with(|| a.cmp(b))
        });
        if let Some(b) = best {
            out.insert(b.clone());
        }
    }
    out
}

/// Decides `p ∈ conv(points)` by a phase-one simplex over the rationals.
fn in_hull(points: &[Vec<i64>], p: &[i64]) -> bool {
    if points.iter().any(|q| q.as_slice() == p) {
        return true;
    }
    let dim = p.len();
    for d in 0..dim {
        let lo = points.iter().map(|q| q[d]).min();
        let hi = points.iter().map(|q| q[d]).max();
        match (lo, hi) {
            (Some(lo), Some(hi)) if lo <= p[d] && p[d] <= hi => {}
            _ => return false,
        }
    }
    // Σ λ_j q_j = p, Σ λ_j = 1, λ ≥ 0
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(dim + 1);
    let mut b: Vec<BigRational> = Vec::with_capacity(dim + 1);
    for d in 0..dim {
        a.push(points.iter().map(|q| BigRational::from_integer(q[d].into())).collect());
        b.push(BigRational::from_integer(p[d].into()));
    }
    a.push(vec![BigRational::one(); points.len()]);
    b.push(BigRational::one());
    feasible(a, b)
}

/// Phase one of the simplex method with Bland's rule: is `{x ≥ 0 : Ax = b}`
/// nonempty?
fn feasible(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> bool {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    for i in 0..m {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for x in a[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    // tableau columns: n originals, then m artificials
    let cols = n + m;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-one objective Σ artificials
    let mut cost = vec![BigRational::zero(); cols];
    let mut obj = BigRational::zero();
    for i in 0..m {
        for j in 0..n {
            cost[j] -= &t[i][j];
        }
        obj -= &b[i];
    }
    loop {
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &b[i] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded direction cannot occur in phase one
            break;
        };
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &piv;
        }
        b[r] /= &piv;
        let prow = t[r].clone();
        let pb = b[r].clone();
        for i in 0..m {
            if i != r && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for (x, y) in t[i].iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
                b[i] -= &f * &pb;
            }
        }
        let f = cost[enter].clone();
        for (x, y) in cost.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
        obj -= &f * &pb;
        basis[r] = enter;
    }
    obj.is_zero()
}

fn same_dim(p: &IntPolytope, q: &IntPolytope) -> Result<()> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch(format!("polytopes in Z^{} and Z^{}", p.dim, q.dim)));
    }
    Ok(())
}

pub fn minkowski(p: &IntPolytope, q: &IntPolytope) -> Result<IntPolytope> {
    same_dim(p, q)?;
    p.nonempty()?;
    q.nonempty()?;
    if q.is_point() {
        return Ok(p.translate(&q.vertices[0]));
    }
    if p.is_point() {
        return Ok(q.translate(&p.vertices[0]));
    }
    let mut sums = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for u in &p.vertices {
        for v in &q.vertices {
            sums.push(u.iter().zip(v).map(|(a, b)| a + b).collect());
        }
    }
    hull(p.dim, &sums)
}

/// The face `F_φ(P)` on which `φ` is minimal.
pub fn face(phi: &Character, p: &IntPolytope) -> Result<IntPolytope> {
    p.nonempty()?;
    if phi.dim() != p.dim {
        return Err(Error::DimensionMismatch(format!("character of dimension {} on Z^{}", phi.dim(), p.dim)));
    }
    let values: Vec<BigRational> = p.vertices.iter().map(|v| phi.eval(v)).collect();
    let min = values.iter().min().expect("nonempty").clone();
    let vertices = p.vertices.iter().zip(&values).filter(|(_, val)| **val == min).map(|(v, _)| v.clone()).collect();
    Ok(IntPolytope { dim: p.dim, vertices })
}

/// Convex hull of the homology classes of the support (no cancellation
/// across words sharing a class).
pub fn poly_of_elt<R: RingElement>(a: &R) -> Result<IntPolytope> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    hull(a.rank(), &a.term_classes())
}

/// A formal difference `[plus] − [minus]` in the polytope group.
#[derive(Debug, Clone)]
pub struct PolytopeDiff {
    plus: IntPolytope,
    minus: IntPolytope,
}

impl PolytopeDiff {
    pub fn new(plus: IntPolytope, minus: IntPolytope) -> Result<Self> {
        same_dim(&plus, &minus)?;
        plus.nonempty()?;
        minus.nonempty()?;
        Ok(PolytopeDiff { plus, minus })
    }

    pub fn from_polytope(p: IntPolytope) -> Result<Self> {
        let dim = p.dim;
        Self::new(p, IntPolytope::origin(dim))
    }

    pub fn zero(dim: usize) -> Self {
        PolytopeDiff { plus: IntPolytope::origin(dim), minus: IntPolytope::origin(dim) }
    }

    pub fn plus(&self) -> &IntPolytope {
        &self.plus
    }

    pub fn minus(&self) -> &IntPolytope {
        &self.minus
    }

    pub fn dim(&self) -> usize {
        self.plus.dim
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(minkowski(&self.plus, &other.plus)?, minkowski(&self.minus, &other.minus)?)
    }

    pub fn neg(&self) -> Self {
        PolytopeDiff { plus: self.minus.clone(), minus: self.plus.clone() }
    }

    /// `k·d` for any integer `k`.
    pub fn scale(&self, k: i64) -> Self {
        let d = PolytopeDiff { plus: self.plus.scale(k.abs()), minus: self.minus.scale(k.abs()) };
        if k < 0 {
            d.neg()
        } else {
            d
        }
    }
}

/// `[P1] − [Q1] = [P2] − [Q2]` iff `P1 + Q2 = P2 + Q1`.
pub fn diff_equal(d1: &PolytopeDiff, d2: &PolytopeDiff) -> Result<bool> {
    same_dim(&d1.plus, &d2.plus)?;
    Ok(minkowski(&d1.plus, &d2.minus)? == minkowski(&d2.plus, &d1.minus)?)
}

impl PartialEq for PolytopeDiff {
    fn eq(&self, other: &Self) -> bool {
        (self.plus == other.plus && self.minus == other.minus) || diff_equal(self, other).unwrap_or(false)
    }
}

impl fmt::Display for PolytopeDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] - [{}]", self.plus, self.minus)
    }
}

/// A polytope-group element modulo translations, with both parts moved so
/// that their lexicographically smallest vertex is the origin.
#[derive(Debug, Clone)]
pub struct WhPolytope(PolytopeDiff);

impl WhPolytope {
    pub fn diff(&self) -> &PolytopeDiff {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        *self == WhPolytope::zero(self.0.dim())
    }

    pub fn zero(dim: usize) -> Self {
        WhPolytope(PolytopeDiff::zero(dim))
    }
}

pub fn wh_normalize(d: &PolytopeDiff) -> WhPolytope {
    let anchor = |p: &IntPolytope| {
        let v: Vec<i64> = p.lex_min_vertex().expect("nonempty").iter().map(|x| -x).collect();
        p.translate(&v)
    };
    WhPolytope(PolytopeDiff { plus: anchor(&d.plus), minus: anchor(&d.minus) })
}

impl PartialEq for WhPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl fmt::Display for WhPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `2·P(τ)` up to translation, the dual Thurston norm ball representative.
pub fn thurston_dual_ball<R: RingElement>(tau: &TorsionValue<R>) -> Result<WhPolytope> {
    match tau {
        TorsionValue::Zero(_) => Err(Error::ZeroElement),
        TorsionValue::Product(_) => {
            let p = tau.polytope().ok_or_else(|| Error::InvariantUnavailable("torsion carries no polytope".into()))?;
            Ok(wh_normalize(&p.scale(2)))
        }
    }
}

/// Per-vertex monicity of an element's polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexReport {
    pub vertex: Vec<i64>,
    /// Exactly one support term sits over the vertex and its coefficient is `±1`.
    pub monic: bool,
    /// Sum of the coefficients of the terms over the vertex.
    pub coefficient: BigInt,
    pub terms: usize,
}

pub fn fibered_report<R: RingElement>(a: &R) -> Result<Vec<VertexReport>> {
    let p = poly_of_elt(a)?;
    let mut by_class: BTreeMap<Vec<i64>, (BigInt, usize, bool)> = BTreeMap::new();
    for (class, c) in a.class_terms() {
        let entry = by_class.entry(class).or_insert((BigInt::zero(), 0, false));
        entry.0 += &c;
        entry.1 += 1;
        entry.2 = c.abs().is_one();
    }
    Ok(p.vertices
        .iter()
        .map(|v| {
            let (coefficient, terms, unit) = by_class.get(v).cloned().expect("vertex comes from the support");
            VertexReport { vertex: v.clone(), monic: terms == 1 && unit, coefficient, terms }
        })
        .collect())
}
