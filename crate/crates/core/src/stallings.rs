//! Stallings core graphs of finitely generated subgroups of free groups:
//! folding, membership, injectivity, compressedness and the weak
//! isomorphism decision for Fox Jacobians.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::{FreeHom, Word};

/// Quotient enumeration refuses graphs with more vertices than this.
pub const VERTEX_CAP: usize = 12;

/// A labeled edge `from --label--> to`, labels one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: usize,
}

/// A folded, connected, base-pointed graph in canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoreGraph {
    #[serde(skip)]
    ambient_rank: usize,
    vertices: usize,
    base: usize,
    edges: Vec<Edge>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Keeps the smaller root so the base (vertex 0) stays a root.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.0[hi] = lo;
        true
    }
}

/// Folds `edges` after the identifications already in `uf`,
/// then relabels canonically from vertex 0.
fn fold(ambient_rank: usize, edges: &[Edge], mut uf: UnionFind) -> CoreGraph {
    loop {
        let mut changed = false;
        let mut out: HashMap<(usize, usize), usize> = HashMap::new();
        let mut inc: HashMap<(usize, usize), usize> = HashMap::new();
        for e in edges {
            let (f, t) = (uf.find(e.from), uf.find(e.to));
            if let Some(&t2) = out.get(&(f, e.label)) {
                changed |= uf.union(t, t2);
            } else {
                out.insert((f, e.label), t);
            }
            let (f, t) = (uf.find(e.from), uf.find(e.to));
            if let Some(&f2) = inc.get(&(t, e.label)) {
                changed |= uf.union(f, f2);
            } else {
                inc.insert((t, e.label), f);
            }
        }
        if !changed {
            break;
        }
    }
    let mut folded: Vec<Edge> = edges.iter().map(|e| Edge { from: uf.find(e.from), to: uf.find(e.to), label: e.label }).collect();
    folded.sort();
    folded.dedup();
    canonical(ambient_rank, uf.find(0), &folded)
}

/// Relabels vertices in BFS order from `base`, following outgoing then
/// incoming edges by label; drops anything unreachable.
fn canonical(ambient_rank: usize, base: usize, edges: &[Edge]) -> CoreGraph {
    let mut adj: BTreeMap<usize, Vec<(u8, usize, usize)>> = BTreeMap::new();
    for e in edges {
        adj.entry(e.from).or_default().push((0, e.label, e.to));
        adj.entry(e.to).or_default().push((1, e.label, e.from));
    }
    for v in adj.values_mut() {
        v.sort();
    }
    let mut order: HashMap<usize, usize> = HashMap::new();
    order.insert(base, 0);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &(_, _, w) in adj.get(&v).map(Vec::as_slice).unwrap_or_default() {
            if !order.contains_key(&w) {
                order.insert(w, order.len());
                queue.push_back(w);
            }
        }
    }
    let mut out: Vec<Edge> = edges
        .iter()
        .filter_map(|e| Some(Edge { from: *order.get(&e.from)?, to: *order.get(&e.to)?, label: e.label }))
        .collect();
    out.sort();
    out.dedup();
    CoreGraph { ambient_rank, vertices: order.len(), base: 0, edges: out }
}

impl CoreGraph {
    /// Builds from raw parts, folding and canonicalizing.
    pub fn from_parts(ambient_rank: usize, vertices: usize, base: usize, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            if e.from >= vertices || e.to >= vertices || base >= vertices {
                return Err(Error::Schema(format!("edge {e:?} or base {base} outside {vertices} vertices")));
            }
            if e.label == 0 || e.label > ambient_rank {
                return Err(Error::GeneratorOutOfRange { index: e.label, rank: ambient_rank });
            }
        }
        // move base to 0
        let swap = |v: usize| if v == base { 0 } else if v == 0 { base } else { v };
        let edges: Vec<Edge> = edges.into_iter().map(|e| Edge { from: swap(e.from), to: swap(e.to), label: e.label }).collect();
        Ok(fold(ambient_rank, &edges, UnionFind::new(vertices)))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Rank of the subgroup, `E − V + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices];
        for e in &self.edges {
            deg[e.from] += 1;
            deg[e.to] += 1;
        }
        deg
    }

    /// Removes degree-one non-base vertices until none remain.
    fn trim(&self) -> CoreGraph {
        let mut edges = self.edges.clone();
        loop {
            let mut deg = vec![0usize; self.vertices];
            for e in &edges {
                deg[e.from] += 1;
                deg[e.to] += 1;
            }
            let before = edges.len();
            edges.retain(|e| (e.from == self.base || deg[e.from] > 1) && (e.to == self.base || deg[e.to] > 1));
            if edges.len() == before {
                break;
            }
        }
        canonical(self.ambient_rank, self.base, &edges)
    }

    /// `true` when no vertex has two equally labeled edges in the same
    /// direction.
    pub fn is_folded(&self) -> bool {
        let mut out = HashSet::new();
        let mut inc = HashSet::new();
        self.edges.iter().all(|e| out.insert((e.from, e.label)) && inc.insert((e.to, e.label)))
    }

    /// `true` when every non-base vertex has degree at least two.
    pub fn is_core(&self) -> bool {
        self.degrees().iter().enumerate().all(|(v, &d)| v == self.base || d >= 2)
    }

    fn step(&self, v: usize, gen: usize, sign: i8) -> Option<usize> {
        if sign > 0 {
            self.edges.iter().find(|e| e.from == v && e.label == gen).map(|e| e.to)
        } else {
            self.edges.iter().find(|e| e.to == v && e.label == gen).map(|e| e.from)
        }
    }

    /// `true` iff `w` reads a loop at the base.
    pub fn contains(&self, w: &Word) -> bool {
        let mut v = self.base;
        for (g, s) in w.letters() {
            match self.step(v, g, s) {
                Some(next) => v = next,
                None => return false,
            }
        }
        v == self.base
    }

    fn identify(&self, a: usize, b: usize) -> CoreGraph {
        let mut uf = UnionFind::new(self.vertices);
        uf.union(a, b);
        fold(self.ambient_rank, &self.edges, uf)
    }
}

/// The core graph of `⟨words⟩ ≤ F_m`: a wedge of loops, folded and trimmed.
pub fn build_core(words: &[Word], m: usize) -> Result<CoreGraph> {
    let mut edges = Vec::new();
    let mut n = 1;
    for w in words {
        if w.rank() != m {
            return Err(Error::RankMismatch { expected: m, found: w.rank() });
        }
        let letters: Vec<(usize, i8)> = w.letters().collect();
        let mut v = 0;
        for (k, &(g, s)) in letters.iter().enumerate() {
            let next = if k + 1 == letters.len() {
                0
            } else {
                n += 1;
                n - 1
            };
            edges.push(if s > 0 { Edge { from: v, to: next, label: g } } else { Edge { from: next, to: v, label: g } });
            v = next;
        }
    }
    Ok(fold(m, &edges, UnionFind::new(n)).trim())
}

pub fn rank(g: &CoreGraph) -> usize {
    g.rank()
}

pub fn membership(w: &Word, g: &CoreGraph) -> bool {
    g.contains(w)
}

/// Free groups are Hopfian, so `φ` is injective iff its image has rank equal
/// to the domain rank.
pub fn is_injective(phi: &FreeHom) -> Result<bool> {
    Ok(build_core(phi.images(), phi.codomain_rank())?.rank() == phi.domain_rank())
}

fn check_cap(g: &CoreGraph) -> Result<()> {
    if g.vertex_count() > VERTEX_CAP {
        return Err(Error::VertexCapExceeded { cap: VERTEX_CAP, found: g.vertex_count() });
    }
    Ok(())
}

/// Every folded quotient of `g`, itself included, deduplicated up to
/// labeled isomorphism, in canonical sorted order.
pub fn algebraic_quotients(g: &CoreGraph) -> Result<Vec<CoreGraph>> {
    check_cap(g)?;
    let mut seen: HashSet<CoreGraph> = HashSet::new();
    explore(g, &mut seen, |_| false);
    let mut out: Vec<CoreGraph> = seen.into_iter().collect();
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices).reverse().then_with(|| a.edges.cmp(&b.edges)));
    Ok(out)
}

/// BFS over pairwise identifications; stops early when `stop` fires and
/// reports whether it did.
fn explore(g: &CoreGraph, seen: &mut HashSet<CoreGraph>, stop: impl Fn(&CoreGraph) -> bool) -> bool {
    let mut queue = VecDeque::from([g.clone()]);
    seen.insert(g.clone());
    if stop(g) {
        return true;
    }
    while let Some(h) = queue.pop_front() {
        for a in 0..h.vertices {
            for b in a + 1..h.vertices {
                let q = h.identify(a, b);
                if seen.insert(q.clone()) {
                    if stop(&q) {
                        return true;
                    }
                    queue.push_back(q);
                }
            }
        }
    }
    false
}

/// `true` iff no subgroup containing `⟨g⟩` has smaller rank. Every overgroup
/// contains an algebraic extension, and those are folded quotients.
pub fn is_compressed(g: &CoreGraph) -> Result<bool> {
    check_cap(g)?;
    let r = g.rank();
    if r <= 1 {
        return Ok(true);
    }
    let mut seen = HashSet::new();
    Ok(!explore(g, &mut seen, |q| q.rank() < r))
}

/// Exact decision of whether `J_φ` is a weak isomorphism: equal ranks, `φ`
/// injective and `im φ` compressed.
pub fn decide_weak_iso(phi: &FreeHom) -> Result<bool> {
    if phi.domain_rank() != phi.codomain_rank() {
        return Ok(false);
    }
    let core = build_core(phi.images(), phi.codomain_rank())?;
    if core.rank() != phi.domain_rank() {
        return Ok(false);
    }
    is_compressed(&core)
}

pub fn is_isomorphism(phi: &FreeHom) -> Result<bool> {
    let m = phi.codomain_rank();
    let core = build_core(phi.images(), m)?;
    if core.rank() != phi.domain_rank() {
        return Ok(false);
    }
    for j in 1..=m {
        if !core.contains(&Word::generator(m, j)?) {
            return Ok(false);
        }
    }
    Ok(true)
}
