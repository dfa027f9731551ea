//! The `l2torsion` command line: one subcommand per operation, a JSON input
//! document from a file or stdin, and a single JSON report on stdout.

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::catalog;
use crate::complex::{torsion, torsion_of_hom, wh_element_equal};
use crate::error::{Error, Result};
use crate::fkdet::{chainlink_closed_form, estimate_fk, fk_of_torsion};
use crate::freegroup::{fox_jacobian, Alphabet, FreeHom};
use crate::groupring::GroupRingElt;
use crate::json::{
    any_complex_from_json, character_from_json, complex_to_json, core_to_json, elt_from_json, fraction_to_json, hom_from_json, hom_to_json, matrix_to_json,
    parse_document, polytope_diff_to_json, polytope_to_json, torsion_to_json, word_from_json, word_to_json, AnyComplex, JsonRing,
};
use crate::leading::{delta, leading_complex, leading_elt, Character, Degree};
use crate::oracle::Budget;
use crate::polytope::{fibered_report, poly_of_elt, thurston_dual_ball, wh_normalize, PolytopeDiff};
use crate::restriction::{coset_table, lambda_matrix, res_invariants, res_torsion, FiniteQuotientSpec, QuotientSpecDoc};
use crate::selftest::{self, Level};
use crate::stallings::{self, build_core, is_compressed, membership, VERTEX_CAP};

#[derive(Debug, Parser)]
#[command(name = "l2torsion", version, about = "Universal L2-torsion of free group homomorphisms")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Base seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest representation degree tried by the invertibility oracle.
    #[arg(long = "budget-size", global = true, default_value_t = 8)]
    pub budget_size: usize,
    /// Monte Carlo trials for determinant estimates.
    #[arg(long, global = true, default_value_t = 20)]
    pub trials: usize,
    /// Matrix size for determinant estimates.
    #[arg(long = "n", global = true, default_value_t = 512)]
    pub size: usize,
    /// Compact single-line output instead of pretty-printed JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Fox Jacobian of a homomorphism.
    FoxJacobian(InputArg),
    /// Torsion of a homomorphism's Fox Jacobian.
    TorsionHom(InputArg),
    /// Taut verdict of the sutured handlebody given by a homomorphism.
    CheckTaut(InputArg),
    /// Product verdict of the sutured handlebody given by a homomorphism.
    CheckProduct(InputArg),
    /// Matrix-chain torsion of a based chain complex.
    TorsionComplex(InputArg),
    /// Leading term of an element or a complex under a character.
    Leading(InputArg),
    /// Polytope of an element.
    Polytope(InputArg),
    /// Twice the polytope of a torsion value, up to translation.
    ThurstonBall(InputArg),
    /// Vertex monicity of an element's polytope.
    FiberedReport(InputArg),
    /// Core graph of a finitely generated subgroup.
    Stallings(InputArg),
    /// Restriction to the finite-index subgroup given by a permutation action.
    Restrict(InputArg),
    /// Monte Carlo Fuglede-Kadison determinant.
    FkDet(InputArg),
    /// The chain-link example for a given number of components.
    Chainlink {
        /// Number of link components, at least 3.
        components: usize,
    },
    /// Runs the acceptance suite.
    Selftest {
        #[arg(long, default_value = "full")]
        level: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InputArg {
    /// JSON input file; stdin when absent or `-`.
    pub input: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FoxJacobian(_) => "fox-jacobian",
            Command::TorsionHom(_) => "torsion-hom",
            Command::CheckTaut(_) => "check-taut",
            Command::CheckProduct(_) => "check-product",
            Command::TorsionComplex(_) => "torsion-complex",
            Command::Leading(_) => "leading",
            Command::Polytope(_) => "polytope",
            Command::ThurstonBall(_) => "thurston-ball",
            Command::FiberedReport(_) => "fibered-report",
            Command::Stallings(_) => "stallings",
            Command::Restrict(_) => "restrict",
            Command::FkDet(_) => "fk-det",
            Command::Chainlink { .. } => "chainlink",
            Command::Selftest { .. } => "selftest",
        }
    }

    /// Input document of the commands that take no file.
    pub fn implicit_input(&self) -> Option<Value> {
        match self {
            Command::Chainlink { components } => Some(json!({"n": components})),
            Command::Selftest { level } => Some(json!({"level": level})),
            _ => None,
        }
    }

    fn input(&self) -> Option<&InputArg> {
        match self {
            Command::FoxJacobian(i)
            | Command::TorsionHom(i)
            | Command::CheckTaut(i)
            | Command::CheckProduct(i)
            | Command::TorsionComplex(i)
            | Command::Leading(i)
            | Command::Polytope(i)
            | Command::ThurstonBall(i)
            | Command::FiberedReport(i)
            | Command::Stallings(i)
            | Command::Restrict(i)
            | Command::FkDet(i) => Some(i),
            Command::Chainlink { .. } | Command::Selftest { .. } => None,
        }
    }
}

impl Options {
    pub fn budget(&self) -> Budget {
        Budget { max_size: self.budget_size, seed: self.seed, ..Budget::default() }
    }

    fn to_json(&self) -> Value {
        json!({"seed": self.seed, "budget": self.budget(), "trials": self.trials, "N": self.size})
    }
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, budget_size: 8, trials: 20, size: 512, json: false }
    }
}

fn read_input(arg: &InputArg) -> Result<Value> {
    let mut text = String::new();
    match arg.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
        }
    }
    parse_document(&text)
}

/// Builds the full report for `command` on an already parsed input.
pub fn report(command: &Command, input: &Value, opts: &Options) -> Result<Value> {
    let result = dispatch(command, input, opts)?;
    Ok(json!({
        "command": command.name(),
        "input": input,
        "options": opts.to_json(),
        "result": result,
    }))
}

fn dispatch(command: &Command, input: &Value, opts: &Options) -> Result<Value> {
    match command {
        Command::FoxJacobian(_) => cmd_fox_jacobian(input),
        Command::TorsionHom(_) => cmd_torsion_hom(input, opts),
        Command::CheckTaut(_) => cmd_check_taut(input),
        Command::CheckProduct(_) => cmd_check_product(input),
        Command::TorsionComplex(_) => cmd_torsion_complex(input, opts),
        Command::Leading(_) => cmd_leading(input, opts),
        Command::Polytope(_) => cmd_polytope(input),
        Command::ThurstonBall(_) => cmd_thurston_ball(input, opts),
        Command::FiberedReport(_) => cmd_fibered_report(input),
        Command::Stallings(_) => cmd_stallings(input),
        Command::Restrict(_) => cmd_restrict(input, opts),
        Command::FkDet(_) => cmd_fk_det(input, opts),
        Command::Chainlink { components } => cmd_chainlink(*components, opts),
        Command::Selftest { level } => cmd_selftest(level.parse()?, opts.seed),
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema(format!("missing field '{key}'")))
}

fn alphabet_of(v: &Value) -> Result<Option<Alphabet>> {
    v.get("alphabet").and_then(Value::as_str).map(Alphabet::new).transpose()
}

fn rank_of(v: &Value) -> Result<usize> {
    field(v, "rank")?.as_u64().map(|r| r as usize).ok_or_else(|| schema("rank must be a non-negative integer"))
}

/// `{"rank", "element", "alphabet"?}`.
fn element_of(v: &Value) -> Result<GroupRingElt> {
    elt_from_json(rank_of(v)?, field(v, "element")?, alphabet_of(v)?.as_ref())
}

/// The document itself, or its `hom` field.
fn hom_of(v: &Value) -> Result<FreeHom> {
    hom_from_json(v.get("hom").unwrap_or(v))
}

fn degree_json(d: &Degree) -> Value {
    match d.finite() {
        Some(x) => json!(x.to_string()),
        None => json!("infinity"),
    }
}

pub fn cmd_fox_jacobian(input: &Value) -> Result<Value> {
    let phi = hom_of(input)?;
    let j = fox_jacobian(&phi);
    Ok(json!({"rows": j.rows(), "cols": j.cols(), "matrix": matrix_to_json(&j), "display": j.to_string()}))
}

pub fn cmd_torsion_hom(input: &Value, opts: &Options) -> Result<Value> {
    let phi = hom_of(input)?;
    let tau = torsion_of_hom(&phi, &opts.budget())?;
    Ok(json!({"torsion": torsion_to_json(phi.codomain_rank(), &tau)}))
}

fn require_genus_match(phi: &FreeHom) -> Result<()> {
    if phi.domain_rank() != phi.codomain_rank() {
        return Err(Error::RankMismatch { expected: phi.codomain_rank(), found: phi.domain_rank() });
    }
    Ok(())
}

pub fn cmd_check_taut(input: &Value) -> Result<Value> {
    let phi = hom_of(input)?;
    require_genus_match(&phi)?;
    let core = build_core(phi.images(), phi.codomain_rank())?;
    let injective = core.rank() == phi.domain_rank();
    let taut = stallings::decide_weak_iso(&phi)?;
    Ok(json!({"taut": taut, "injective": injective, "image_rank": core.rank(), "compressed": injective && taut}))
}

pub fn cmd_check_product(input: &Value) -> Result<Value> {
    let phi = hom_of(input)?;
    require_genus_match(&phi)?;
    Ok(json!({"product": stallings::is_isomorphism(&phi)?}))
}

pub fn cmd_torsion_complex(input: &Value, opts: &Options) -> Result<Value> {
    let budget = opts.budget();
    Ok(match any_complex_from_json(input)? {
        AnyComplex::Free(c) => {
            c.validate()?;
            json!({"torsion": torsion_to_json(c.rank(), &torsion(&c, &budget)?)})
        }
        AnyComplex::Laurent(c) => {
            c.validate()?;
            json!({"torsion": torsion_to_json(c.rank(), &torsion(&c, &budget)?)})
        }
    })
}

fn leading_of_complex<R: JsonRing>(phi: &Character, c: &crate::complex::BasedComplex<R>, budget: &Budget) -> Result<Value> {
    let lc = leading_complex(phi, c)?;
    let tau = torsion(&lc, budget)?;
    Ok(json!({"complex": complex_to_json(&lc), "torsion": torsion_to_json(lc.rank(), &tau)}))
}

/// `{"character", "rank", "element"}` or `{"character", "complex"}`.
pub fn cmd_leading(input: &Value, opts: &Options) -> Result<Value> {
    let phi = character_from_json(field(input, "character")?)?;
    if let Some(c) = input.get("complex") {
        return match any_complex_from_json(c)? {
            AnyComplex::Free(c) => leading_of_complex(&phi, &c, &opts.budget()),
            AnyComplex::Laurent(c) => leading_of_complex(&phi, &c, &opts.budget()),
        };
    }
    let a = element_of(input)?;
    let l = leading_elt(&phi, &a)?;
    Ok(json!({"leading": l.to_json(), "display": l.to_string(), "degree": degree_json(&delta(&phi, &a)?)}))
}

pub fn cmd_polytope(input: &Value) -> Result<Value> {
    let p = poly_of_elt(&element_of(input)?)?;
    Ok(json!({"polytope": polytope_to_json(&p)}))
}

/// From an element taken as a torsion representative, or from `{"hom"}`.
pub fn cmd_thurston_ball(input: &Value, opts: &Options) -> Result<Value> {
    let ball = if input.get("hom").is_some() {
        let tau = torsion_of_hom(&hom_of(input)?, &opts.budget())?;
        thurston_dual_ball(&tau)?
    } else {
        let p = poly_of_elt(&element_of(input)?)?;
        wh_normalize(&PolytopeDiff::from_polytope(p)?.scale(2))
    };
    Ok(json!({"ball": polytope_diff_to_json(ball.diff())}))
}

pub fn cmd_fibered_report(input: &Value) -> Result<Value> {
    let a = element_of(input)?;
    let vertices: Vec<Value> = fibered_report(&a)?
        .into_iter()
        .map(|v| json!({"vertex": v.vertex, "monic": v.monic, "coefficient": crate::json::coeff_to_json(&v.coefficient), "terms": v.terms}))
        .collect();
    let all_monic = vertices.iter().all(|v| v["monic"] == json!(true));
    Ok(json!({"vertices": vertices, "all_monic": all_monic}))
}

/// `{"rank", "words", "alphabet"?, "members"?}`.
pub fn cmd_stallings(input: &Value) -> Result<Value> {
    let rank = rank_of(input)?;
    let alphabet = alphabet_of(input)?;
    let words = field(input, "words")?.as_array().ok_or_else(|| schema("words must be an array"))?;
    let words = words.iter().map(|w| word_from_json(rank, w, alphabet.as_ref())).collect::<Result<Vec<_>>>()?;
    let core = build_core(&words, rank)?;
    let compressed = if core.vertex_count() <= VERTEX_CAP { json!(is_compressed(&core)?) } else { Value::Null };
    let mut out = json!({"core": core_to_json(&core), "rank": core.rank(), "compressed": compressed});
    if let Some(ms) = input.get("members").and_then(Value::as_array) {
        let verdicts = ms
            .iter()
            .map(|m| word_from_json(rank, m, alphabet.as_ref()).map(|w| json!({"word": word_to_json(&w), "member": membership(&w, &core)})))
            .collect::<Result<Vec<_>>>()?;
        out["members"] = Value::Array(verdicts);
    }
    Ok(out)
}

/// `{"quotient": {rank, degree, perms}}` plus an element or a `hom`.
pub fn cmd_restrict(input: &Value, opts: &Options) -> Result<Value> {
    let doc: QuotientSpecDoc = serde_json::from_value(field(input, "quotient")?.clone()).map_err(|e| schema(format!("quotient: {e}")))?;
    let data = coset_table(&FiniteQuotientSpec::from_doc(&doc)?)?;
    let mut out = json!({
        "subgroup_rank": data.rank(),
        "transversal": data.transversal().iter().map(word_to_json).collect::<Vec<_>>(),
        "basis": data.basis().iter().map(word_to_json).collect::<Vec<_>>(),
    });
    if input.get("hom").is_some() {
        let tau = torsion_of_hom(&hom_of(input)?, &opts.budget())?;
        out["restricted_abelian_det"] = fraction_to_json(&res_torsion(&tau, &data)?);
    } else {
        let z = element_of(input)?;
        let lam = lambda_matrix(&z, &data)?;
        out["lambda"] = matrix_to_json(&lam);
        out["lambda_display"] = json!(lam.to_string());
        out["restricted_abelian_det"] = fraction_to_json(&res_invariants(&z, &data)?);
    }
    Ok(out)
}

pub fn cmd_fk_det(input: &Value, opts: &Options) -> Result<Value> {
    let est = if input.get("hom").is_some() {
        let tau = torsion_of_hom(&hom_of(input)?, &opts.budget())?;
        fk_of_torsion(&tau, opts.size, opts.trials, opts.seed)?
    } else {
        estimate_fk(&element_of(input)?, opts.size, opts.trials, opts.seed)?
    };
    serde_json::to_value(est).map_err(|e| Error::Schema(e.to_string()))
}

pub fn cmd_chainlink(n: usize, opts: &Options) -> Result<Value> {
    let phi = catalog::chainlink_hom(n)?;
    let tau = torsion_of_hom(&phi, &opts.budget())?;
    let expected = catalog::chainlink_element(n)?;
    let matches = match tau.element_rep().and_then(|r| r.as_element()) {
        Some(rep) => wh_element_equal(&rep, &expected)?,
        None => false,
    };
    let y_polytope = match tau.polytope() {
        Some(p) => Some(p.plus().linear_image(&catalog::chainlink_y_coordinates(n))?),
        None => None,
    };
    Ok(json!({
        "n": n,
        "hom": hom_to_json(&phi),
        "jacobian": fox_jacobian(&phi).to_string(),
        "torsion": torsion_to_json(phi.codomain_rank(), &tau),
        "expected_element": expected.to_string(),
        "element_matches": matches,
        "polytope_y_coordinates": y_polytope.as_ref().map(polytope_to_json),
        "taut": stallings::decide_weak_iso(&phi)?,
        "product": stallings::is_isomorphism(&phi)?,
        "fk_closed_form": chainlink_closed_form(n),
    }))
}

pub fn cmd_selftest(level: Level, seed: u64) -> Result<Value> {
    let results = selftest::run(level, seed);
    for r in &results {
        eprintln!("{r}");
    }
    let passed = results.iter().all(|r| r.passed);
    // timings go to stderr only, so the report replays identically
    let summary: Vec<Value> = results.iter().map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail})).collect();
    Ok(json!({"level": level, "passed": passed, "criteria": summary}))
}

/// Runs the CLI on the process arguments and returns the exit status.
pub fn main() -> i32 {
    let cli = Cli::parse();
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    let start = Instant::now();
    let input = match cli.command.input() {
        Some(arg) => match read_input(arg) {
            Ok(v) => v,
            Err(e) => return report_error(&e),
        },
        None => cli.command.implicit_input().unwrap_or(Value::Null),
    };
    let out = match report(&cli.command, &input, &cli.opts) {
        Ok(v) => v,
        Err(e) => return report_error(&e),
    };
    let text = if cli.opts.json { serde_json::to_string(&out) } else { serde_json::to_string_pretty(&out) };
    println!("{}", text.expect("values serialize"));
    eprintln!("{} finished in {:.3}s", cli.command.name(), start.elapsed().as_secs_f64());
    if matches!(cli.command, Command::Selftest { .. }) && out["result"]["passed"] != json!(true) {
        return 4;
    }
    0
}

fn report_error(e: &Error) -> i32 {
    eprintln!("{}", json!({"error": {"kind": e.kind(), "message": e.to_string()}}));
    e.exit_code()
}
