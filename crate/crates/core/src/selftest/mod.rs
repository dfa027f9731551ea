//! The acceptance suite, runnable from the library, the CLI and the test
//! harness. Every randomized check compares against an answer obtained
//! without the code path under test (construction, brute force, or a naive
//! reimplementation from the defining rules).

pub mod gen;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog;
use crate::complex::{dualize, presentation_complex, torsion, torsion_of_hom, wh_element_equal, TorsionValue};
use crate::error::{Error, Result};
use crate::fkdet::{chainlink_closed_form, estimate_fk};
use crate::freegroup::{compose, fox_derivative, fox_jacobian, FreeHom, Word};
use crate::groupring::{GRMatrix, GroupRingElt, LaurentFraction, LaurentPoly};
use crate::leading::{delta, leading_complex, leading_elt, leading_fraction};
use crate::oracle::{abelian_cert, certify, derive_seed, Budget, Certificate, InvertVerdict};
use crate::polytope::{diff_equal, hull, IntPolytope, PolytopeDiff};
use crate::restriction::{check_res_leading_commute, coset_table, lambda_matrix, res_invariants, FiniteQuotientSpec};
use crate::stallings::{build_core, decide_weak_iso, is_compressed, is_injective, is_isomorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Reduced case counts, for smoke runs.
    Quick,
    /// Full case counts and tolerances.
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" | "paper" => Ok(Level::Full),
            other => Err(Error::Schema(format!("unknown selftest level {other:?}, expected quick or full"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Quick => "quick",
            Level::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {} ({:.2}s): {}", self.id, self.name, self.seconds, self.detail)
    }
}

pub const CRITERIA: usize = 11;

const NAMES: [&str; CRITERIA] = [
    "chain-link family",
    "genus-2 handlebody",
    "Fuglede-Kadison estimate",
    "circle and torus",
    "Fox calculus",
    "leading terms",
    "restriction",
    "Stallings decisions",
    "invertibility oracle",
    "duality",
    "trefoil",
];

/// Case counts, scaled down at the quick level.
struct Plan {
    level: Level,
}

impl Plan {
    fn count(&self, full: usize) -> usize {
        match self.level {
            Level::Full => full,
            Level::Quick => full.div_ceil(10),
        }
    }

    fn chain_links(&self) -> std::ops::RangeInclusive<usize> {
        match self.level {
            Level::Full => 3..=8,
            Level::Quick => 3..=5,
        }
    }

    fn fk_links(&self) -> std::ops::RangeInclusive<usize> {
        match self.level {
            Level::Full => 3..=5,
            Level::Quick => 3..=3,
        }
    }
}

/// `Ok(detail)` on success, `Err(detail)` on failure.
type Outcome = std::result::Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn run_criterion(id: usize, level: Level, seed: u64) -> CriterionResult {
    let plan = Plan { level };
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0, id));
    let start = Instant::now();
    let outcome = match id {
        1 => chain_links(&plan),
        2 => genus2(),
        3 => fk(&plan, seed),
        4 => circle_torus(),
        5 => fox(&plan, &mut rng),
        6 => leading(&plan, &mut rng),
        7 => restriction(&plan, &mut rng),
        8 => stallings(&plan, &mut rng),
        9 => oracle(&plan, &mut rng),
        10 => duality(&plan, &mut rng),
        11 => trefoil(),
        _ => Err(format!("no criterion {id}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let name = NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown").to_string();
    match outcome {
        Ok(detail) => CriterionResult { id, name, passed: true, detail, seconds },
        Err(detail) => CriterionResult { id, name, passed: false, detail, seconds },
    }
}

pub fn run(level: Level, seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run_criterion(id, level, seed)).collect()
}

fn chain_links(plan: &Plan) -> Outcome {
    let budget = Budget::default();
    let mut times = Vec::new();
    for n in plan.chain_links() {
        let t = Instant::now();
        let phi = lib(catalog::chainlink_hom(n))?;
        let tau = lib(torsion_of_hom(&phi, &budget))?;
        let rep = tau.element_rep().and_then(|r| r.as_element()).ok_or(format!("n = {n}: no element representative"))?;
        check(lib(wh_element_equal(&rep, &lib(catalog::chainlink_element(n))?))?, || format!("n = {n}: representative {rep} is not 1 + y_1 + ... + y_{}", n - 1))?;
        let poly = tau.polytope().ok_or(format!("n = {n}: no polytope"))?;
        let coords = catalog::chainlink_y_coordinates(n);
        let plus = lib(poly.plus().linear_image(&coords))?;
        let minus = lib(poly.minus().linear_image(&coords))?;
        check(minus.is_point(), || format!("n = {n}: denominator polytope is not a point"))?;
        let shift: Vec<i64> = minus.vertices()[0].iter().map(|x| -x).collect();
        let simplex = IntPolytope::standard_simplex(n - 1);
        check(plus.translate(&shift) == simplex, || format!("n = {n}: polytope {plus} is not the standard simplex"))?;
        check(lib(decide_weak_iso(&phi))?, || format!("n = {n}: taut verdict false"))?;
        check(!lib(is_isomorphism(&phi))?, || format!("n = {n}: product verdict true"))?;
        let secs = t.elapsed().as_secs_f64();
        check(secs < 5.0, || format!("n = {n}: took {secs:.2}s"))?;
        times.push(format!("n={n} {secs:.3}s"));
    }
    Ok(times.join(", "))
}

fn genus2() -> Outcome {
    let t = Instant::now();
    let tau = lib(torsion_of_hom(&catalog::genus2_hom(), &Budget::default()))?;
    let rep = tau.element_rep().and_then(|r| r.as_element()).ok_or("no element representative")?;
    check(rep == catalog::genus2_element(), || format!("representative {rep} differs from 1 + yx - u"))?;
    let expected = lib(hull(2, &[vec![0, 0], vec![0, 1], vec![1, 1]]))?;
    let poly = tau.polytope().ok_or("no polytope")?;
    check(lib(diff_equal(poly, &lib(PolytopeDiff::from_polytope(expected))?))?, || format!("polytope {poly} differs"))?;
    let secs = t.elapsed().as_secs_f64();
    check(secs < 1.0, || format!("took {secs:.2}s"))?;
    Ok(format!("rep = {rep}, {secs:.3}s"))
}

fn fk(plan: &Plan, seed: u64) -> Outcome {
    // closed-form values as printed
    let printed = [(3, 1.15470), (4, 1.29904), (5, 1.43108)];
    for (n, v) in printed {
        check((chainlink_closed_form(n) - v).abs() < 1e-5, || format!("closed form for n = {n} is {}", chainlink_closed_form(n)))?;
    }
    let mut out = Vec::new();
    for n in plan.fk_links() {
        let t = Instant::now();
        let a = lib(catalog::chainlink_element(n))?;
        let e = lib(estimate_fk(&a, 512, 20, seed))?;
        let target = chainlink_closed_form(n);
        let rel = (e.estimate / target - 1.0).abs();
        let secs = t.elapsed().as_secs_f64();
        check(rel < 0.02, || format!("n = {n}: estimate {:.5} vs {target:.5} (rel {rel:.4})", e.estimate))?;
        check(secs < 60.0, || format!("n = {n}: took {secs:.1}s"))?;
        out.push(format!("n={n} {:.5}/{target:.5}", e.estimate));
    }
    Ok(out.join(", "))
}

fn circle_torus() -> Outcome {
    let t = Instant::now();
    let budget = Budget::default();
    let tau = lib(torsion(&catalog::circle_complex(), &budget))?;
    let p = tau.product().ok_or("circle torsion is zero")?;
    let x_minus_1 = lib(GroupRingElt::parse(1, "x1 - 1"))?;
    check(p.factors.len() == 1 && p.factors[0].exponent == -1 && *p.factors[0].matrix.get(0, 0) == x_minus_1, || format!("circle factors {:?}", p.factors))?;
    let t_minus_1 = LaurentPoly::var(1, 0).sub(&LaurentPoly::one(1));
    let expected = lib(LaurentFraction::new(LaurentPoly::one(1), t_minus_1))?;
    let got = tau.abelian_det().ok_or("circle has no abelian determinant")?;
    check(got.value_eq(&expected), || format!("circle abelian determinant {got}"))?;
    let torus = lib(torsion(&catalog::torus_complex(), &budget))?;
    let d = torus.abelian_det().ok_or("torus torsion is zero or lacks a determinant")?;
    check(d.is_unit(), || format!("torus abelian determinant {d} is not a unit"))?;
    let secs = t.elapsed().as_secs_f64();
    check(secs < 1.0, || format!("took {secs:.2}s"))?;
    Ok(format!("circle {got}, torus {d}"))
}

fn fox(plan: &Plan, rng: &mut ChaCha8Rng) -> Outcome {
    let (n_prod, n_fund, n_chain) = (plan.count(500), plan.count(300), plan.count(100));
    for case in 0..n_prod {
        let rank = rng.gen_range(1..=3);
        let (u, v) = (gen::letters(rng, rank, 8), gen::letters(rng, rank, 8));
        let uw = lib(Word::reduce(rank, &u))?;
        let vw = lib(Word::reduce(rank, &v))?;
        let uv = [u.clone(), v.clone()].concat();
        let uvw = lib(Word::reduce(rank, &uv))?;
        for j in 1..=rank {
            let lhs = lib(fox_derivative(&uvw, j))?;
            let rhs = lib(fox_derivative(&uw, j))?.add(&GroupRingElt::from_word(uw.clone()).mul(&lib(fox_derivative(&vw, j))?));
            check(lhs == rhs, || format!("product rule case {case}: d({uvw})/dx{j}"))?;
            check(lhs == gen::naive_fox(rank, &uv, j), || format!("case {case}: d({uvw})/dx{j} disagrees with the letterwise rule"))?;
        }
    }
    for case in 0..n_fund {
        let rank = rng.gen_range(1..=3);
        let w = gen::word(rng, rank, 10);
        let mut sum = GroupRingElt::zero(rank);
        for j in 1..=rank {
            let xj = GroupRingElt::from_word(lib(Word::generator(rank, j))?).sub(&GroupRingElt::one(rank));
            sum = sum.add(&lib(fox_derivative(&w, j))?.mul(&xj));
        }
        let lhs = GroupRingElt::from_word(w.clone()).sub(&GroupRingElt::one(rank));
        check(sum == lhs, || format!("fundamental identity case {case}: w = {w}"))?;
    }
    for case in 0..n_chain {
        let (a, b, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let phi = gen::hom(rng, a, b, 4);
        let psi = gen::hom(rng, b, c, 4);
        let lhs = fox_jacobian(&lib(compose(&psi, &phi))?);
        let rhs = lib(lib(fox_jacobian(&phi).try_map(c, |e| psi.apply_elt(e)))?.mul(&fox_jacobian(&psi)))?;
        check(lhs == rhs, || format!("chain rule case {case}"))?;
    }
    Ok(format!("{n_prod} product, {n_fund} fundamental, {n_chain} chain-rule cases"))
}

fn leading(plan: &Plan, rng: &mut ChaCha8Rng) -> Outcome {
    let (n_hom, n_law, n_chain) = (plan.count(500), plan.count(100), plan.count(100));
    for case in 0..n_hom {
        let rank = rng.gen_range(1..=3);
        let a = gen::nonzero_element(rng, rank, 4, 5);
        let b = gen::nonzero_element(rng, rank, 4, 5);
        let phi = gen::character(rng, rank);
        let lhs = lib(leading_elt(&phi, &a.mul(&b)))?;
        let rhs = lib(leading_elt(&phi, &a))?.mul(&lib(leading_elt(&phi, &b))?);
        check(lhs == rhs, || format!("homomorphy case {case}: a = {a}, b = {b}"))?;
        let d = lib(delta(&phi, &a))?.add(&lib(delta(&phi, &b))?);
        check(lib(delta(&phi, &a.mul(&b)))? == d, || format!("degree additivity case {case}"))?;
    }
    let budget = Budget::default();
    let (mut accepted, mut attempts) = (0, 0);
    while accepted < n_law {
        attempts += 1;
        if attempts > 50 * n_law {
            return fail(format!("only {accepted} of {n_law} leading complexes were acyclic"));
        }
        let dim = rng.gen_range(1..=2);
        let k = gen::known_complex(rng, dim, false);
        let expected = k.torsion.expect("acyclic by construction");
        let phi = gen::character(rng, dim);
        let lc = lib(leading_complex(&phi, &k.complex))?;
        let tau_l = lib(torsion(&lc, &budget))?;
        let Some(got) = tau_l.abelian_det() else { continue };
        let want = lib(leading_fraction(&phi, &expected))?;
        check(got.eq_up_to_unit(&want), || format!("leading law: tau(L C) = {got}, L tau(C) = {want}"))?;
        accepted += 1;
    }
    for case in 0..n_chain {
        let dim = rng.gen_range(1..=2);
        let k = gen::known_complex(rng, dim, true);
        let tau = lib(torsion(&k.complex, &budget))?;
        match (&k.torsion, &tau) {
            (None, TorsionValue::Zero(_)) => {}
            (Some(want), TorsionValue::Product(_)) => {
                let got = tau.abelian_det().ok_or(format!("case {case}: no determinant"))?;
                check(got.eq_up_to_unit(want), || format!("chain case {case}: {got} vs {want}"))?;
            }
            (want, _) => return fail(format!("chain case {case}: expected {want:?}, got zero = {}", tau.is_zero())),
        }
    }
    Ok(format!("{n_hom} homomorphy cases, {n_law} leading-law complexes ({attempts} drawn), {n_chain} chain-vs-oracle complexes"))
}

fn restriction(plan: &Plan, rng: &mut ChaCha8Rng) -> Outcome {
    let (n_mult, n_law) = (plan.count(100), plan.count(100));
    for case in 0..n_mult {
        let spec = gen::quotient_spec(rng, 2);
        let data = lib(coset_table(&spec))?;
        let a = gen::element(rng, 2, 3, 4);
        let b = gen::element(rng, 2, 3, 4);
        let lhs = lib(lambda_matrix(&a.mul(&b), &data))?;
        let rhs = lib(lib(lambda_matrix(&a, &data))?.mul(&lib(lambda_matrix(&b, &data))?))?;
        check(lhs == rhs, || format!("multiplicativity case {case}"))?;
    }
    let data = lib(coset_table(&lib(FiniteQuotientSpec::new(1, 2, vec![vec![2, 1]]))?))?;
    let r = lib(res_invariants(&lib(GroupRingElt::parse(1, "x1 - 1"))?, &data))?;
    let t_minus_1 = LaurentFraction::from_poly(LaurentPoly::var(1, 0).sub(&LaurentPoly::one(1)));
    check(r.value_eq(&t_minus_1) || r.value_eq(&t_minus_1.neg()), || format!("res(x - 1) = {r}"))?;
    let (mut accepted, mut skipped) = (0, 0);
    while accepted < n_law {
        if skipped > 20 * n_law {
            return fail(format!("only {accepted} of {n_law} restriction triples had nonsingular abelianizations"));
        }
        let spec = gen::quotient_spec(rng, 2);
        let data = lib(coset_table(&spec))?;
        let z = gen::nonzero_element(rng, 2, 3, 3);
        let phi = gen::character(rng, 2);
        match check_res_leading_commute(&z, &phi, &data) {
            Ok(true) => accepted += 1,
            Ok(false) => return fail(format!("commutation fails for z = {z}, phi = {phi:?}")),
            Err(Error::InvariantUnavailable(_)) => skipped += 1,
            Err(e) => return fail(format!("library error: {e}")),
        }
    }
    Ok(format!("{n_mult} multiplicativity pairs, res(x-1) = {r}, {n_law} commutation triples ({skipped} singular skipped)"))
}

fn stallings(plan: &Plan, rng: &mut ChaCha8Rng) -> Outcome {
    let n = plan.count(30);
    let (mut injective, mut not) = (0, 0);
    for case in 0..n {
        let phi = if case % 2 == 0 {
            gen::short_kernel_hom(rng)
        } else {
            // two images of length at most 3: any relation is u^a = u^b with a short kernel word
            let codomain = rng.gen_range(2..=3);
            let images = (0..2).map(|_| gen::nontrivial_word(rng, codomain, 3)).collect();
            FreeHom::new(2, codomain, images).expect("ranks agree")
        };
        let words = gen::all_words(phi.domain_rank(), 6);
        let mut kernel = None;
        for w in &words {
            if lib(phi.apply(w))?.is_identity() {
                kernel = Some(w.clone());
                break;
            }
        }
        let decided = lib(is_injective(&phi))?;
        check(decided == kernel.is_none(), || format!("case {case}: injective = {decided}, brute-force kernel {kernel:?}, images {:?}", phi.images()))?;
        if decided {
            injective += 1;
        } else {
            not += 1;
        }
    }
    let w = |s: &str| Word::parse(2, s).expect("valid");
    let c1 = lib(build_core(&[w("x1^2"), w("x2")], 2))?;
    check(lib(is_compressed(&c1))?, || "<x^2, y> reported not compressed".into())?;
    let c2 = lib(build_core(&[w("x1^2"), w("x2^2"), w("x1 x2 x1 x2")], 2))?;
    check(!lib(is_compressed(&c2))?, || "<x^2, y^2, (xy)^2> reported compressed".into())?;
    for k in 3..=6 {
        check(lib(decide_weak_iso(&lib(catalog::chainlink_hom(k))?))?, || format!("chain link {k} not a weak isomorphism"))?;
    }
    Ok(format!("{n} homs ({injective} injective, {not} not), compressedness and chain links exact"))
}

fn elementary(rng: &mut ChaCha8Rng, size: usize, rank: usize) -> GRMatrix {
    let mut e = GRMatrix::identity(size, rank);
    if size >= 2 {
        let a = rng.gen_range(0..size);
        let mut b = rng.gen_range(0..size - 1);
        if b >= a {
            b += 1;
        }
        e.set(a, b, gen::element(rng, rank, 2, 3));
    }
    e
}

fn diagonal_entry(rng: &mut ChaCha8Rng, rank: usize) -> GroupRingElt {
    match rng.gen_range(0..3) {
        0 => gen::trivial_unit(rng, rank, 3),
        1 => gen::nonzero_element(rng, rank, 3, 3),
        _ => loop {
            // uv − vu: nonzero but invisible to the abelianization
            let u = gen::nontrivial_word(rng, rank, 2);
            let v = gen::nontrivial_word(rng, rank, 2);
            let uv = u.multiply(&v).expect("same rank");
            let vu = v.multiply(&u).expect("same rank");
            if uv != vu {
                return GroupRingElt::from_word(uv).sub(&GroupRingElt::from_word(vu));
            }
        },
    }
}

fn oracle(plan: &Plan, rng: &mut ChaCha8Rng) -> Outcome {
    let budget = Budget::default();
    let (n_inv, n_sing) = (plan.count(200), plan.count(200));
    let mut random_certs = 0;
    for case in 0..n_inv {
        let size = rng.gen_range(1..=3);
        let rank = 2;
        let mut m = GRMatrix::identity(size, rank);
        for i in 0..size {
            m.set(i, i, diagonal_entry(rng, rank));
        }
        for _ in 0..rng.gen_range(0..=3) {
            let e = elementary(rng, size, rank);
            m = if rng.gen_bool(0.5) { lib(e.mul(&m))? } else { lib(m.mul(&e))? };
        }
        match certify(&m, &budget) {
            InvertVerdict::CertifiedInvertible { certificate } => {
                if matches!(certificate, Certificate::RandomSubstitution { .. }) {
                    random_certs += 1;
                }
            }
            other => return fail(format!("invertible case {case} not certified: {other:?} for {m}")),
        }
    }
    for case in 0..n_sing {
        let size = rng.gen_range(2..=3);
        let rank = 2;
        let k = rng.gen_range(0..size);
        let mut rows: Vec<Vec<GroupRingElt>> = (0..size).map(|_| (0..size).map(|_| gen::element(rng, rank, 2, 3)).collect()).collect();
        let mut combo = vec![GroupRingElt::zero(rank); size];
        for (i, row) in rows.iter().enumerate() {
            if i == k {
                continue;
            }
            let c = gen::element(rng, rank, 2, 2);
            for (acc, x) in combo.iter_mut().zip(row) {
                *acc = acc.add(&c.mul(x));
            }
        }
        rows[k] = combo;
        let m = lib(GRMatrix::from_rows(rank, size, rows))?;
        check(!certify(&m, &budget).is_invertible(), || format!("singular case {case} certified invertible: {m}"))?;
    }
    let witness = lib(GRMatrix::from_rows(
        2,
        2,
        vec![
            vec![lib(GroupRingElt::parse(2, "x1"))?, GroupRingElt::one(2)],
            vec![lib(GroupRingElt::parse(2, "x1 x2"))?, lib(GroupRingElt::parse(2, "x2"))?],
        ],
    ))?;
    check(lib(abelian_cert(&witness))?.is_none(), || "[[x,1],[xy,y]] has a nonzero abelianized determinant".into())?;
    let v = certify(&witness, &budget);
    check(matches!(v, InvertVerdict::CertifiedInvertible { certificate: Certificate::RandomSubstitution { .. } }), || format!("[[x,1],[xy,y]]: {v:?}"))?;
    Ok(format!("{n_inv} invertible ({random_certs} by random substitution), {n_sing} singular, [[x,1],[xy,y]] certified"))
}

fn duality(plan: &Plan, rng: &mut ChaCha8Rng) -> Outcome {
    let n = plan.count(100);
    let budget = Budget::default();
    for case in 0..n {
        let dim = rng.gen_range(1..=2);
        let k = gen::known_complex(rng, dim, false);
        let expected = k.torsion.expect("acyclic by construction");
        let top = k.complex.top();
        let dual = lib(dualize(&k.complex))?;
        let tau = lib(torsion(&dual, &budget))?;
        let got = tau.abelian_det().ok_or(format!("case {case}: dual torsion is zero"))?;
        let want = lib(expected.involute().powi(if top % 2 == 1 { 1 } else { -1 }))?;
        check(got.eq_up_to_unit(&want), || format!("case {case}: tau(C*) = {got}, expected {want}"))?;
    }
    Ok(format!("{n} complexes"))
}

fn trefoil() -> Outcome {
    let (gens, rels) = catalog::trefoil();
    let c = lib(presentation_complex(gens, &rels))?;
    let tau = lib(torsion(&c, &Budget::default()))?;
    let got = tau.abelian_det().ok_or("trefoil torsion is zero")?;
    let t = |e: i64, c: i64| LaurentPoly::monomial(1, vec![e], c);
    let alexander = t(2, 1).add(&t(1, -1)).add(&t(0, 1));
    // classical Alexander polynomial from the letterwise Fox rule, a, b ↦ t
    let letters: Vec<(usize, i8)> = rels[0].letters().collect();
    let classical = gen::naive_fox(gens, &letters, 1).abelianize().substitute(&[vec![1], vec![1]], 1);
    check(classical.eq_up_to_unit(&alexander), || format!("classical Alexander polynomial {classical}"))?;
    let want = lib(LaurentFraction::new(classical.clone(), t(1, 1).sub(&t(0, 1))))?;
    check(got.eq_up_to_unit(&want), || format!("abelian torsion {got}"))?;
    let coeffs: Vec<BigInt> = got.numerator().unit_normal().terms().map(|(_, c)| c.clone()).collect();
    let extreme_ok = coeffs.first().is_some_and(|c| c.abs() == BigInt::from(1)) && coeffs.last().is_some_and(|c| c.abs() == BigInt::from(1));
    check(extreme_ok, || format!("numerator {} is not monic at both ends", got.numerator()))?;
    Ok(format!("abelian torsion {got}"))
}
