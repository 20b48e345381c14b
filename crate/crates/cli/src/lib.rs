//! Command line front end: reads configuration documents (JSON), runs the
//! computations of `infcones` and prints JSON reports or DOT graphs.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse or usage error,
//! 3 size guardrail.

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use infcones::cones::{self, TaggedRay};
use infcones::configuration::{Configuration, InequalityRow, PointRecord};
use infcones::pencil::{attach_chains, pencil_report, PencilConfiguration};
use infcones::polyhedral::{self, Pairing, RationalCone};
use infcones::positivity::{self, Verdict, DEFAULT_GRID_DENOM};
use infcones::random::{random_pencils, RandomOptions};
use infcones::zariski;
use infcones::{DivisorClass, Error, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_GUARDRAIL: i32 = 3;

/// Environment variable overriding the largest denominator of the
/// P-sufficiency falsifier grid.
pub const GRID_DENOM_VAR: &str = "INFCONES_GRID_DENOM";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub id: String,
    #[serde(default)]
    pub proximate_to: Vec<String>,
    #[serde(default)]
    pub on_line: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub length: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ams_claimed: Option<bool>,
}

/// Base points of the pencil in order, then the lengths of the free chains
/// attached at the last base point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub points: Vec<PointDoc>,
    #[serde(default)]
    pub chains: Vec<ChainDoc>,
    #[serde(default)]
    pub meta: MetaDoc,
}

/// A failure with its exit code and a JSON payload for stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub report: Value,
}

impl Failure {
    fn parse(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_PARSE, report: json!({ "error": "parse", "message": msg.into() }) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Structural(_) => (EXIT_PARSE, "parse"),
            Error::Guardrail(_) => (EXIT_GUARDRAIL, "guardrail"),
            Error::InvalidConfiguration(_) => (EXIT_VALIDATION, "invalid-configuration"),
            Error::Domain(_) => (EXIT_VALIDATION, "domain"),
            Error::Unsupported(_) => (EXIT_VALIDATION, "unsupported"),
            Error::Internal(_) => (EXIT_VALIDATION, "internal"),
        };
        let mut report = json!({ "error": kind, "message": e.to_string() });
        if let Error::InvalidConfiguration(list) = &e {
            report["failures"] = json!(list);
        }
        Failure { code, report }
    }
}

impl ConfigDocument {
    /// Parses and checks the document-level invariants: at least one point,
    /// unique ids, proximities to earlier points only, positive chain lengths.
    pub fn from_json(text: &str) -> Result<Self, Failure> {
        // serde_json messages end with "at line L column C".
        let doc: ConfigDocument = serde_json::from_str(text).map_err(|e| Failure::parse(e.to_string()))?;
        doc.check()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    fn check(&self) -> Result<(), Failure> {
        if self.points.is_empty() {
            return Err(Failure::parse("the points list is empty"));
        }
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (i, p) in self.points.iter().enumerate() {
            for q in &p.proximate_to {
                if !seen.contains_key(q.as_str()) {
                    return Err(Failure::parse(format!("point '{}' refers to '{q}', which is not listed before it", p.id)));
                }
            }
            if seen.insert(&p.id, i + 1).is_some() {
                return Err(Failure::parse(format!("duplicate point id '{}'", p.id)));
            }
        }
        if let Some(c) = self.chains.iter().position(|c| c.length == 0) {
            return Err(Failure::parse(format!("chain {} has length 0", c + 1)));
        }
        Ok(())
    }

    /// The configuration: base points as listed, then the chains.
    pub fn configuration(&self) -> Result<Configuration, Failure> {
        let ordinals: HashMap<&str, usize> = self.points.iter().enumerate().map(|(i, p)| (p.id.as_str(), i + 1)).collect();
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut prox: Vec<usize> = p.proximate_to.iter().map(|q| ordinals[q.as_str()]).collect();
                prox.sort_unstable();
                PointRecord::new(p.id.clone(), i + 1, &prox, p.on_line)
            })
            .collect();
        let base = Configuration::new(points, &[self.points.len()])?;
        let lengths: Vec<usize> = self.chains.iter().map(|c| c.length).collect();
        if lengths.is_empty() {
            Ok(base)
        } else {
            Ok(attach_chains(&base, &lengths)?)
        }
    }

    /// The document describing a validated configuration.
    pub fn from_pencil(pc: &PencilConfiguration) -> Self {
        let c = pc.config();
        let points = (1..=pc.s0())
            .map(|u| {
                let p = c.point(u);
                PointDoc {
                    id: p.id.clone(),
                    proximate_to: p.proximate_to.iter().map(|&v| c.point(v).id.clone()).collect(),
                    on_line: p.on_line,
                }
            })
            .collect();
        let chains = pc.chain_lengths().iter().map(|&length| ChainDoc { length }).collect();
        ConfigDocument { points, chains, meta: MetaDoc::default() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "infcones", version, about = "Cones of curves, nef cones and positivity for surfaces blown up along pencils at infinity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Configuration document (JSON).
    #[arg(required_unless_present = "seed", conflicts_with = "seed")]
    pub file: Option<PathBuf>,
    /// Use a random valid configuration drawn from this seed instead of a file.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a configuration and report every check.
    Validate(Input),
    /// Generators of the cone of curves or the nef cone.
    Cones {
        #[command(flatten)]
        input: Input,
        #[arg(long, group = "which")]
        nef: bool,
        #[arg(long, group = "which")]
        ne: bool,
        /// Check both duality statements with the polyhedral engine.
        #[arg(long = "check-duality", group = "which")]
        check_duality: bool,
    },
    /// Finite generation of the Cox ring.
    Cox(Input),
    /// Zariski decomposition of the anticanonical class.
    Zariski(Input),
    /// Dual graph of the exceptional divisors.
    Graph {
        #[command(flatten)]
        input: Input,
        /// Emit DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// P-sufficiency of the configuration.
    Psuff(Input),
    /// Print the document of a random valid configuration.
    Generate {
        #[arg(long)]
        seed: u64,
        /// Only base points, no chains.
        #[arg(long)]
        base_only: bool,
    },
}

/// Output of a successful command.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Text(String),
}

impl Output {
    pub fn render(&self) -> String {
        match self {
            Output::Json(v) => serde_json::to_string_pretty(v).expect("values serialize"),
            Output::Text(t) => t.clone(),
        }
    }
}

fn grid_denom() -> Result<u32, Failure> {
    match std::env::var(GRID_DENOM_VAR) {
        Err(_) => Ok(DEFAULT_GRID_DENOM),
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Failure::parse(format!("{GRID_DENOM_VAR} must be a positive integer, got '{v}'"))),
        },
    }
}

fn load(input: &Input) -> Result<ConfigDocument, Failure> {
    if let Some(seed) = input.seed {
        let pc = random_pencils(seed, 1, &RandomOptions::default())
            .pop()
            .ok_or_else(|| Failure::parse("the random generator produced no configuration"))?;
        return Ok(ConfigDocument::from_pencil(&pc));
    }
    let path = input.file.as_ref().expect("clap requires a file or a seed");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    ConfigDocument::from_json(&text)
}

fn load_pencil(input: &Input) -> Result<(ConfigDocument, PencilConfiguration), Failure> {
    let doc = load(input)?;
    let pc = PencilConfiguration::validate(doc.configuration()?)?;
    Ok((doc, pc))
}

fn rat(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn class_json(c: &DivisorClass) -> Value {
    Value::Array(c.coordinates().iter().map(rat).collect())
}

fn rows_json(rows: &[InequalityRow]) -> Value {
    rows.iter().map(|r| json!({ "index": r.index, "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds })).collect()
}

pub fn validate(doc: &ConfigDocument) -> Result<Value, Failure> {
    let config = match doc.configuration() {
        Ok(c) => c,
        Err(f) if f.code == EXIT_VALIDATION => {
            return Err(Failure { code: EXIT_VALIDATION, report: json!({ "valid": false, "checks": [], "error": f.report }) })
        }
        Err(f) => return Err(f),
    };
    let report = pencil_report(&config);
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "failures": c.failures, "indices": c.indices }))
        .collect();
    let mut out = json!({
        "valid": report.passed(),
        "checks": checks,
        "s": config.len(),
        "s0": config.base_len(),
        "k": config.block_sizes().len() - 1,
        "i_l": config.i_l(),
    });
    if let Some(d) = report.degree {
        out["degree"] = json!(d);
    }
    if let Some(sg) = &report.semigroup {
        out["g"] = json!(sg.g);
        out["semigroup"] = json!({
            "beta_bars": sg.beta_bars,
            "e": sg.e,
            "n": sg.n_seq,
            "st": sg.st_labels,
            "rho": sg.rho_labels,
        });
    }
    if let Some(t) = &report.campillo {
        out["inequalities"] = json!({ "first": rows_json(&t.item_i), "second": rows_json(&t.item_ii) });
    }
    if !report.passed() {
        return Err(Failure { code: EXIT_VALIDATION, report: out });
    }
    let pc = PencilConfiguration::validate(config)?;
    let ams = positivity::ams_check(&pc);
    out["ams"] = json!({
        "is_ams": ams.is_ams,
        "square_residual": ams.square_residual,
        "sum_residual": ams.sum_residual,
    });
    if let Some(claimed) = doc.meta.ams_claimed {
        out["ams_claim_matches"] = json!(claimed == ams.is_ams);
    }
    Ok(out)
}

fn canonical_rays(rays: &[TaggedRay]) -> Result<(Vec<Value>, Vec<String>), Failure> {
    let classes: Vec<DivisorClass> = rays.iter().map(|r| r.class.clone()).collect();
    let cone = RationalCone::from_classes(&classes)?;
    let rep = polyhedral::redundancy(&cone)?;
    let kept = rep
        .kept
        .iter()
        .map(|&i| json!({ "tag": rays[i].tag.to_string(), "ray": cone.rays()[i].iter().map(|x| x.to_string()).collect::<Vec<_>>() }))
        .collect();
    let redundant = rep.redundant.iter().map(|&i| rays[i].tag.to_string()).collect();
    Ok((kept, redundant))
}

pub fn cones_report(pc: &PencilConfiguration, nef: bool, ne: bool, check_duality: bool) -> Result<Value, Failure> {
    let g = cones::nef_generators(pc);
    if check_duality {
        let ne_cone = RationalCone::from_classes(&g.ne_rays())?;
        let nef_cone = RationalCone::from_classes(&g.nef_rays())?;
        let dual_ne = polyhedral::dual_cone(&ne_cone, Pairing::Intersection)?;
        let dual_nef = polyhedral::dual_cone(&nef_cone, Pairing::Intersection)?;
        let a = polyhedral::cones_equal(&dual_ne, &nef_cone)?;
        let b = polyhedral::cones_equal(&dual_nef, &ne_cone)?;
        let word = |x: bool| if x { "equal" } else { "unequal" };
        let redundant_nef: Vec<String> =
            polyhedral::redundancy(&nef_cone)?.redundant.iter().map(|&i| g.nef[i].tag.to_string()).collect();
        let redundant_ne: Vec<String> =
            polyhedral::redundancy(&ne_cone)?.redundant.iter().map(|&i| g.ne[i].tag.to_string()).collect();
        let report = json!({
            "result": word(a && b),
            "dual_of_ne_vs_nef": word(a),
            "dual_of_nef_vs_ne": word(b),
            "ne_generators": g.ne.len(),
            "nef_generators": g.nef.len(),
            "redundant_nef": redundant_nef,
            "redundant_ne": redundant_ne,
        });
        return if a && b { Ok(report) } else { Err(Failure { code: EXIT_VALIDATION, report }) };
    }
    let mut out = json!({ "coordinates": "E0, E1, ..., Es (total transforms)" });
    if ne || !nef {
        let (kept, redundant) = canonical_rays(&g.ne)?;
        out["ne"] = json!({ "rays": kept, "redundant": redundant });
    }
    if nef || !ne {
        let (kept, redundant) = canonical_rays(&g.nef)?;
        out["nef"] = json!({ "rays": kept, "redundant": redundant });
    }
    Ok(out)
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::ProvenSufficient(c) => json!({ "verdict": v.name(), "criterion": c.as_str() }),
        Verdict::ProvenInsufficient { witness, value } => {
            json!({ "verdict": v.name(), "witness": witness.iter().map(rat).collect::<Vec<_>>(), "value": rat(value) })
        }
        Verdict::Inconclusive => json!({ "verdict": v.name() }),
    }
}

pub fn psuff_report(config: &Configuration, denom: u32) -> Result<Value, Failure> {
    let rep = positivity::p_sufficiency(config, denom)?;
    let mut out = verdict_json(&rep.verdict);
    out["g_matrix"] = json!(rep.g.entries);
    out["grid_denominator"] = json!(denom);
    Ok(out)
}

pub fn cox_report(pc: &PencilConfiguration, denom: u32) -> Result<Value, Failure> {
    let verdict = positivity::cox_verdict(pc, denom)?;
    let psuff = positivity::p_sufficiency(pc.config(), denom)?;
    let big = positivity::big_anticanonical_report(pc, &psuff.verdict);
    Ok(json!({
        "verdict": verdict.name(),
        "reason": verdict.reason(),
        "p_sufficiency": verdict_json(&psuff.verdict),
        "anticanonical": {
            "big": big.big,
            "self_intersection": rat(&big.anticanonical_square),
            "checked_nef_generators": big.checked_rays,
            "nonpositive_nef_generators": big.nonpositive_rays,
        },
    }))
}

pub fn zariski_report(pc: &PencilConfiguration) -> Result<Value, Failure> {
    let z = zariski::anticanonical_decompose(pc)?;
    let ne = cones::ne_generators(pc);
    let negative: Vec<Value> = z
        .negative
        .iter()
        .map(|c| json!({ "curve": ne[c.index].tag.to_string(), "coefficient": rat(&c.coefficient) }))
        .collect();
    let closed = match zariski::anticanonical_closed_form(pc) {
        Ok(c) if c == z => json!("agrees"),
        Ok(_) => json!("disagrees"),
        Err(e) => json!(format!("not applicable: {e}")),
    };
    let free_point = zariski::redundancy_test(&z, &[zariski::last_base_divisor_index(pc)]);
    let mut positive = json!({ "class": class_json(&z.positive) });
    if pc.k() == 0 {
        // P = a·E0 + b·D_{0,n} on the base surface.
        let last = cones::d(pc, 0, pc.s0())?;
        if let Some((a, b)) = line_and_last(&z.positive, &last) {
            positive["line_coefficient"] = rat(&a);
            positive["last_divisor_coefficient"] = rat(&b);
        }
    }
    Ok(json!({
        "positive": positive,
        "negative": negative,
        "closed_form": closed,
        "free_point_on_last_base_divisor": {
            "multiplicity": rat(&free_point.multiplicity),
            "redundant": free_point.redundant,
        },
    }))
}

/// Writes `p = a·E0 + b·last` when possible.
fn line_and_last(p: &DivisorClass, last: &DivisorClass) -> Option<(Rational, Rational)> {
    let pivot = last.exc.iter().position(|x| *x != Rational::from_integer(0.into()))?;
    let b = &p.exc[pivot] / &last.exc[pivot];
    let a = &p.line - &b * &last.line;
    let rebuilt = (&a * &DivisorClass::hyperplane(p.len())) + (&b * last);
    (rebuilt == *p).then_some((a, b))
}

pub fn graph_report(pc: &PencilConfiguration, dot: bool) -> Result<Output, Failure> {
    let c = pc.config();
    if dot {
        return Ok(Output::Text(c.to_dot(|u| pc.label(u))));
    }
    let edges: Vec<Value> = c.exceptional_edges().iter().map(|&(u, v)| json!([pc.label(u), pc.label(v)])).collect();
    let graph = c.dual_graph()?;
    Ok(Output::Json(json!({
        "vertices": (1..=c.len()).map(|u| pc.label(u)).collect::<Vec<_>>(),
        "edges": edges,
        "st": graph.st_labels.iter().map(|&u| pc.label(u)).collect::<Vec<_>>(),
        "rho": graph.rho_labels.iter().map(|&u| pc.label(u)).collect::<Vec<_>>(),
        "g": graph.g(),
    })))
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Validate(input) => validate(&load(input)?).map(Output::Json),
        Command::Cones { input, nef, ne, check_duality } => {
            let (_, pc) = load_pencil(input)?;
            cones_report(&pc, *nef, *ne, *check_duality).map(Output::Json)
        }
        Command::Cox(input) => {
            let denom = grid_denom()?;
            let (_, pc) = load_pencil(input)?;
            cox_report(&pc, denom).map(Output::Json)
        }
        Command::Zariski(input) => {
            let (_, pc) = load_pencil(input)?;
            zariski_report(&pc).map(Output::Json)
        }
        Command::Graph { input, dot } => {
            let (_, pc) = load_pencil(input)?;
            graph_report(&pc, *dot)
        }
        Command::Psuff(input) => {
            let denom = grid_denom()?;
            let config = load(input)?.configuration()?;
            psuff_report(&config, denom).map(Output::Json)
        }
        Command::Generate { seed, base_only } => {
            let opts = RandomOptions { base_only: *base_only, ..Default::default() };
            let pc = random_pencils(*seed, 1, &opts)
                .pop()
                .ok_or_else(|| Failure::parse("the random generator produced no configuration"))?;
            Ok(Output::Text(ConfigDocument::from_pencil(&pc).to_json()))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code with the text for stdout.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    match execute(&cli) {
        Ok(out) => (EXIT_OK, out.render()),
        Err(f) => (f.code, serde_json::to_string_pretty(&f.report).expect("values serialize")),
    }
}
