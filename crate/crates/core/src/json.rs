//! JSON documents for every payload type, built on `serde_json::Value`.
//!
//! Coefficients are JSON integers when they fit in `i64` and decimal
//! strings otherwise; both forms are accepted on input.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{BasedComplex, ElementRep, Evidence, Factor, FormalProduct, Invariants, TorsionValue, ZeroReason};
use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, FreeHom, Word};
use crate::groupring::{GroupRingElt, LaurentFraction, LaurentPoly, Matrix, RingElement};
use crate::leading::{parse_rational, Character};
use crate::polytope::{IntPolytope, PolytopeDiff};
use crate::stallings::{CoreGraph, Edge};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema(format!("missing field '{key}'")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().and_then(|x| usize::try_from(x).ok()).ok_or_else(|| schema(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(format!("{what} must be a string")))
}

pub fn coeff_to_json(c: &BigInt) -> Value {
    match i64::try_from(c) {
        Ok(x) => json!(x),
        Err(_) => json!(c.to_string()),
    }
}

pub fn coeff_from_json(v: &Value) -> Result<BigInt> {
    if let Some(x) = v.as_i64() {
        return Ok(x.into());
    }
    if let Some(s) = v.as_str() {
        return s.trim().parse().map_err(|_| schema(format!("bad integer '{s}'")));
    }
    Err(schema("coefficient must be an integer or a decimal string"))
}

/// Parses a word in either syntax; `alphabet` names single letters.
pub fn word_from_json(rank: usize, v: &Value, alphabet: Option<&Alphabet>) -> Result<Word> {
    let s = as_str(v, "word")?;
    match alphabet {
        Some(a) => Word::parse_with(rank, s, a),
        None => Word::parse(rank, s),
    }
}

pub fn word_to_json(w: &Word) -> Value {
    json!(w.to_string())
}

/// Ring elements with a JSON term-list form.
pub trait JsonRing: RingElement {
    fn to_json(&self) -> Value;
    fn from_json(rank: usize, v: &Value) -> Result<Self>;
    const RING: &'static str;
}

impl JsonRing for GroupRingElt {
    const RING: &'static str = "free";

    fn to_json(&self) -> Value {
        Value::Array(self.terms().map(|(w, c)| json!({"coeff": coeff_to_json(c), "word": w.to_string()})).collect())
    }

    fn from_json(rank: usize, v: &Value) -> Result<Self> {
        elt_from_json(rank, v, None)
    }
}

/// A group-ring element; a plain string is read with the element grammar.
pub fn elt_from_json(rank: usize, v: &Value, alphabet: Option<&Alphabet>) -> Result<GroupRingElt> {
    if let Some(s) = v.as_str() {
        return match alphabet {
            Some(a) => GroupRingElt::parse_with(rank, s, a),
            None => GroupRingElt::parse(rank, s),
        };
    }
    let mut terms = Vec::new();
    for t in as_array(v, "element")? {
        terms.push((word_from_json(rank, field(t, "word")?, alphabet)?, coeff_from_json(field(t, "coeff")?)?));
    }
    Ok(GroupRingElt::from_terms(rank, terms))
}

impl JsonRing for LaurentPoly {
    const RING: &'static str = "laurent";

    fn to_json(&self) -> Value {
        Value::Array(self.terms().map(|(e, c)| json!({"coeff": coeff_to_json(c), "exps": e})).collect())
    }

    fn from_json(dim: usize, v: &Value) -> Result<Self> {
        let mut terms = Vec::new();
        for t in as_array(v, "laurent polynomial")? {
            let exps: Vec<i64> = serde_json::from_value(field(t, "exps")?.clone()).map_err(|e| schema(format!("exps: {e}")))?;
            if exps.len() != dim {
                return Err(Error::DimensionMismatch(format!("exponent vector {exps:?} in dimension {dim}")));
            }
            terms.push((exps, coeff_from_json(field(t, "coeff")?)?));
        }
        Ok(LaurentPoly::from_terms(dim, terms))
    }
}

pub fn matrix_to_json<R: JsonRing>(m: &Matrix<R>) -> Value {
    Value::Array(m.to_rows().iter().map(|row| Value::Array(row.iter().map(JsonRing::to_json).collect())).collect())
}

/// Reads a row-major matrix of known shape.
pub fn matrix_from_json<R: JsonRing>(rank: usize, rows: usize, cols: usize, v: &Value) -> Result<Matrix<R>> {
    let arr = as_array(v, "matrix")?;
    if arr.len() != rows {
        return Err(schema(format!("matrix has {} rows, expected {rows}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for row in arr {
        let row = as_array(row, "matrix row")?;
        if row.len() != cols {
            return Err(schema(format!("matrix row has {} entries, expected {cols}", row.len())));
        }
        out.push(row.iter().map(|e| R::from_json(rank, e)).collect::<Result<Vec<R>>>()?);
    }
    Matrix::from_rows(rank, cols, out)
}

/// Reads a matrix whose shape is taken from the document.
pub fn matrix_from_json_any<R: JsonRing>(rank: usize, v: &Value) -> Result<Matrix<R>> {
    let arr = as_array(v, "matrix")?;
    let cols = arr.first().map(|r| as_array(r, "matrix row").map(Vec::len)).transpose()?.unwrap_or(0);
    matrix_from_json(rank, arr.len(), cols, v)
}

pub fn complex_to_json<R: JsonRing>(c: &BasedComplex<R>) -> Value {
    json!({
        "ring": R::RING,
        "rank": c.rank(),
        "dims": c.dims(),
        "boundaries": c.boundaries_top_down().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn complex_from_json<R: JsonRing>(v: &Value) -> Result<BasedComplex<R>> {
    let rank = as_usize(field(v, "rank")?, "rank")?;
    let dims: Vec<usize> = as_array(field(v, "dims")?, "dims")?.iter().map(|d| as_usize(d, "dims entry")).collect::<Result<_>>()?;
    let bs = as_array(field(v, "boundaries")?, "boundaries")?;
    if dims.is_empty() || bs.len() + 1 != dims.len() {
        return Err(schema(format!("{} dims need {} boundaries, got {}", dims.len(), dims.len().saturating_sub(1), bs.len())));
    }
    let boundaries = bs.iter().enumerate().map(|(k, b)| matrix_from_json(rank, dims[k], dims[k + 1], b)).collect::<Result<Vec<_>>>()?;
    BasedComplex::new(rank, dims, boundaries)
}

/// A complex over whichever ring the document names (default `free`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyComplex {
    Free(BasedComplex<GroupRingElt>),
    Laurent(BasedComplex<LaurentPoly>),
}

pub fn any_complex_from_json(v: &Value) -> Result<AnyComplex> {
    match v.get("ring").and_then(Value::as_str).unwrap_or("free") {
        "free" => Ok(AnyComplex::Free(complex_from_json(v)?)),
        "laurent" => Ok(AnyComplex::Laurent(complex_from_json(v)?)),
        other => Err(schema(format!("unknown ring '{other}'"))),
    }
}

pub fn character_to_json(phi: &Character) -> Value {
    json!({"values": phi.values().iter().map(ToString::to_string).collect::<Vec<_>>()})
}

pub fn character_from_json(v: &Value) -> Result<Character> {
    let vals = as_array(field(v, "values")?, "values")?;
    let mut out = Vec::with_capacity(vals.len());
    for x in vals {
        out.push(match x {
            Value::String(s) => parse_rational(s)?,
            Value::Number(n) => parse_rational(&n.to_string())?,
            _ => return Err(schema("character values must be rational strings")),
        });
    }
    Ok(Character::new(out))
}

pub fn polytope_to_json(p: &IntPolytope) -> Value {
    if p.is_empty() {
        json!({"empty": true, "dim": p.dim()})
    } else {
        json!({"dim": p.dim(), "vertices": p.vertices()})
    }
}

pub fn polytope_from_json(v: &Value) -> Result<IntPolytope> {
    let dim = as_usize(field(v, "dim")?, "dim")?;
    if v.get("empty").and_then(Value::as_bool) == Some(true) {
        return Ok(IntPolytope::empty(dim));
    }
    let pts: Vec<Vec<i64>> = serde_json::from_value(field(v, "vertices")?.clone()).map_err(|e| schema(format!("vertices: {e}")))?;
    if pts.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch(format!("vertex outside dimension {dim}")));
    }
    crate::polytope::hull(dim, &pts)
}

pub fn polytope_diff_to_json(d: &PolytopeDiff) -> Value {
    json!({"plus": polytope_to_json(d.plus()), "minus": polytope_to_json(d.minus())})
}

pub fn polytope_diff_from_json(v: &Value) -> Result<PolytopeDiff> {
    PolytopeDiff::new(polytope_from_json(field(v, "plus")?)?, polytope_from_json(field(v, "minus")?)?)
}

pub fn fraction_to_json(f: &LaurentFraction) -> Value {
    json!({"numerator": f.numerator().to_json(), "denominator": f.denominator().to_json(), "display": f.to_string()})
}

pub fn fraction_from_json(dim: usize, v: &Value) -> Result<LaurentFraction> {
    LaurentFraction::new(LaurentPoly::from_json(dim, field(v, "numerator")?)?, LaurentPoly::from_json(dim, field(v, "denominator")?)?)
}

/// `{"domain_rank", "codomain_rank", "images", "alphabet"?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDoc {
    pub domain_rank: usize,
    pub codomain_rank: usize,
    pub images: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<String>,
}

pub fn hom_to_json(phi: &FreeHom) -> Value {
    json!({
        "domain_rank": phi.domain_rank(),
        "codomain_rank": phi.codomain_rank(),
        "images": phi.images().iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

pub fn hom_from_json(v: &Value) -> Result<FreeHom> {
    let doc: HomDoc = serde_json::from_value(v.clone()).map_err(|e| schema(format!("hom: {e}")))?;
    let alphabet = doc.alphabet.as_deref().map(Alphabet::new).transpose()?.unwrap_or_default();
    let images: Vec<&str> = doc.images.iter().map(String::as_str).collect();
    FreeHom::parse(doc.domain_rank, doc.codomain_rank, &images, &alphabet)
}

pub fn core_to_json(g: &CoreGraph) -> Value {
    json!({
        "vertices": g.vertex_count(),
        "base": g.base(),
        "edges": g.edges(),
        "rank": g.rank(),
        "ambient_rank": g.ambient_rank(),
    })
}

pub fn core_from_json(v: &Value) -> Result<CoreGraph> {
    let ambient = as_usize(field(v, "ambient_rank")?, "ambient_rank")?;
    let vertices = as_usize(field(v, "vertices")?, "vertices")?;
    let base = as_usize(field(v, "base")?, "base")?;
    let edges: Vec<Edge> = serde_json::from_value(field(v, "edges")?.clone()).map_err(|e| schema(format!("edges: {e}")))?;
    CoreGraph::from_parts(ambient, vertices, base, edges)
}

fn element_rep_to_json<R: JsonRing>(rep: &ElementRep<R>) -> Value {
    json!({
        "numerator": rep.numerator.to_json(),
        "denominator": rep.denominator.to_json(),
        "sign": rep.sign,
        "display": format!("{}({}) / ({})", if rep.sign < 0 { "-" } else { "" }, rep.numerator, rep.denominator),
    })
}

fn element_rep_from_json<R: JsonRing>(rank: usize, v: &Value) -> Result<ElementRep<R>> {
    let sign = field(v, "sign")?.as_i64().filter(|s| *s == 1 || *s == -1).ok_or_else(|| schema("sign must be 1 or -1"))?;
    Ok(ElementRep { numerator: R::from_json(rank, field(v, "numerator")?)?, denominator: R::from_json(rank, field(v, "denominator")?)?, sign: sign as i8 })
}

pub fn torsion_to_json<R: JsonRing>(rank: usize, tau: &TorsionValue<R>) -> Value {
    match tau {
        TorsionValue::Zero(reason) => json!({"ring": R::RING, "rank": rank, "zero": true, "reason": reason}),
        TorsionValue::Product(p) => {
            let factors: Vec<Value> = p
                .factors
                .iter()
                .map(|f| {
                    json!({
                        "degree": f.degree,
                        "exponent": f.exponent,
                        "rows": f.matrix.rows(),
                        "matrix": matrix_to_json(&f.matrix),
                        "evidence": f.evidence,
                    })
                })
                .collect();
            let inv = &p.invariants;
            json!({
                "ring": R::RING,
                "rank": rank,
                "zero": false,
                "factors": factors,
                "element_rep": inv.element_rep.as_ref().map(element_rep_to_json),
                "abelian_det": inv.abelian_det.as_ref().map(fraction_to_json),
                "polytope": inv.polytope.as_ref().map(polytope_diff_to_json),
            })
        }
    }
}

pub fn torsion_from_json<R: JsonRing>(v: &Value) -> Result<TorsionValue<R>> {
    let rank = as_usize(field(v, "rank")?, "rank")?;
    if field(v, "zero")?.as_bool().ok_or_else(|| schema("zero must be a boolean"))? {
        let reason: ZeroReason = serde_json::from_value(field(v, "reason")?.clone()).map_err(|e| schema(format!("reason: {e}")))?;
        return Ok(TorsionValue::Zero(reason));
    }
    let mut factors = Vec::new();
    for f in as_array(field(v, "factors")?, "factors")? {
        let n = as_usize(field(f, "rows")?, "rows")?;
        let exponent = field(f, "exponent")?.as_i64().filter(|e| *e == 1 || *e == -1).ok_or_else(|| schema("exponent must be 1 or -1"))?;
        let evidence: Evidence = serde_json::from_value(field(f, "evidence")?.clone()).map_err(|e| schema(format!("evidence: {e}")))?;
        factors.push(Factor {
            degree: as_usize(field(f, "degree")?, "degree")?,
            matrix: matrix_from_json(rank, n, n, field(f, "matrix")?)?,
            exponent: exponent as i8,
            evidence,
        });
    }
    let opt = |key: &str| v.get(key).filter(|x| !x.is_null());
    let invariants = Invariants {
        element_rep: opt("element_rep").map(|x| element_rep_from_json(rank, x)).transpose()?,
        abelian_det: opt("abelian_det").map(|x| fraction_from_json(rank, x)).transpose()?,
        polytope: opt("polytope").map(polytope_diff_from_json).transpose()?,
    };
    Ok(TorsionValue::Product(FormalProduct { factors, invariants }))
}

pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::complex::{torsion, torsion_of_hom};
    use crate::oracle::Budget;

    #[test]
    fn element_round_trip() {
        let a = GroupRingElt::parse(2, "3 x1 x2^-1 - 2 + x2^5").unwrap();
        assert_eq!(GroupRingElt::from_json(2, &a.to_json()).unwrap(), a);
        let big = GroupRingElt::monomial(BigInt::from(10).pow(30), Word::identity(1));
        assert_eq!(GroupRingElt::from_json(1, &big.to_json()).unwrap(), big);
        assert!(GroupRingElt::from_json(1, &json!([{"coeff": 1}])).is_err());
        assert_eq!(elt_from_json(1, &json!("x1 - 1"), None).unwrap(), GroupRingElt::parse(1, "x1 - 1").unwrap());
    }

    #[test]
    fn complex_round_trip() {
        let c = catalog::circle_complex();
        assert_eq!(complex_from_json::<GroupRingElt>(&complex_to_json(&c)).unwrap(), c);
        let t = catalog::torus_complex();
        match any_complex_from_json(&complex_to_json(&t)).unwrap() {
            AnyComplex::Laurent(u) => assert_eq!(u, t),
            AnyComplex::Free(_) => panic!("wrong ring"),
        }
    }

    #[test]
    fn torsion_round_trip() {
        let tau = torsion(&catalog::circle_complex(), &Budget::default()).unwrap();
        let back: TorsionValue<GroupRingElt> = torsion_from_json(&torsion_to_json(1, &tau)).unwrap();
        assert_eq!(back, tau);
        let tau = torsion_of_hom(&catalog::genus2_hom(), &Budget::default()).unwrap();
        assert_eq!(torsion_from_json::<GroupRingElt>(&torsion_to_json(2, &tau)).unwrap(), tau);
    }

    #[test]
    fn other_round_trips() {
        let phi = catalog::chainlink_hom(4).unwrap();
        assert_eq!(hom_from_json(&hom_to_json(&phi)).unwrap(), phi);
        let g = crate::stallings::build_core(phi.images(), 3).unwrap();
        assert_eq!(core_from_json(&core_to_json(&g)).unwrap(), g);
        let chi = Character::parse(&["1/2", "-3"]).unwrap();
        assert_eq!(character_from_json(&character_to_json(&chi)).unwrap(), chi);
        let p = IntPolytope::standard_simplex(3);
        assert_eq!(polytope_from_json(&polytope_to_json(&p)).unwrap(), p);
        assert!(polytope_from_json(&json!({"empty": true, "dim": 2})).unwrap().is_empty());
    }
}
