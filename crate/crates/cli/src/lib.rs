//! Command-line front end: datum ingestion, module queries, machine-readable
//! output. Exit codes: 0 success, 1 usage, 2 parse error, 3 domain error.

use std::collections::{BTreeMap, BTreeSet};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mutheta::crystal;
use mutheta::datum::ShimuraDatum;
use mutheta::galois;
use mutheta::polygon;
use mutheta::schur;
use mutheta::theta::{self, OperatorDescriptor, OperatorKind, ThetaVariant};
use mutheta::weights::{self, Weight};

pub const SCHEMA: &str = "mutheta/1";

/// Outcome of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub payload: String,
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    fn ok(payload: String) -> Self {
        CommandResult {
            exit_code: 0,
            payload,
            diagnostics: Vec::new(),
        }
    }
    fn fail(exit_code: i32, message: String) -> Self {
        CommandResult {
            exit_code,
            payload: String::new(),
            diagnostics: vec![message],
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<mutheta::datum::DatumError> for CliError {
    fn from(e: mutheta::datum::DatumError) -> Self {
        match e {
            mutheta::datum::DatumError::Invalid(ref m) if m.starts_with("TOML") || m.starts_with("JSON") => {
                CliError::Parse(e.to_string())
            }
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<mutheta::weights::WeightError> for CliError {
    fn from(e: mutheta::weights::WeightError) -> Self {
        match e {
            mutheta::weights::WeightError::Parse(_) => CliError::Parse(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<mutheta::polygon::PolygonError> for CliError {
    fn from(e: mutheta::polygon::PolygonError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<mutheta::crystal::CrystalError> for CliError {
    fn from(e: mutheta::crystal::CrystalError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<mutheta::schur::SchurError> for CliError {
    fn from(e: mutheta::schur::SchurError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<mutheta::theta::ThetaError> for CliError {
    fn from(e: mutheta::theta::ThetaError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<mutheta::galois::GaloisError> for CliError {
    fn from(e: mutheta::galois::GaloisError) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mutheta",
    about = "Exact combinatorics of mod-p theta operators on PEL-type Shimura data",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct DatumArg {
    /// Datum file (TOML or canonical JSON).
    #[arg(long = "datum")]
    datum: String,
}

#[derive(Debug, Args)]
struct FormatArg {
    /// Output format.
    #[arg(long = "format", default_value = "json")]
    format: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate and echo a datum.
    Datum {
        #[command(subcommand)]
        action: DatumAction,
    },
    /// Mu-ordinary Newton polygons of a datum.
    Polygon {
        #[command(flatten)]
        datum: DatumArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Classify a weight and report its derived scalars.
    Classify {
        #[command(flatten)]
        datum: DatumArg,
        /// Weight in text syntax, e.g. "tau:2,2;taustar:5".
        #[arg(long = "weight", conflicts_with = "weight_file")]
        weight: Option<String>,
        /// Weight in canonical JSON form, read from a file.
        #[arg(long = "weight-file")]
        weight_file: Option<String>,
    },
    /// Schur-functor queries.
    Schur {
        #[command(subcommand)]
        action: SchurAction,
    },
    /// Standard mu-ordinary crystal queries.
    Crystal {
        #[command(subcommand)]
        action: CrystalAction,
    },
    /// Operator weight maps, consistency checks, cycle exploration.
    Theta {
        #[command(subcommand)]
        action: ThetaAction,
    },
    /// Cyclotomic-twist ledger for weights of modularity.
    Galois {
        #[command(subcommand)]
        action: GaloisAction,
    },
}

#[derive(Debug, Subcommand)]
enum DatumAction {
    /// Canonical JSON echo of a validated datum.
    Dump {
        #[command(flatten)]
        datum: DatumArg,
    },
    /// Validate only.
    Check {
        #[command(flatten)]
        datum: DatumArg,
    },
}

#[derive(Debug, Subcommand)]
enum SchurAction {
    /// Weyl dimension of a dominant tuple; optionally cross-checked against
    /// the Young-symmetrizer oracle and the determinant-power identity.
    Dim {
        #[arg(long)]
        rank: usize,
        /// Dominant tuple, comma separated, e.g. "2,1,0".
        #[arg(long)]
        tuple: String,
        /// Also run the brute-force oracle and determinant-power trials.
        #[arg(long, default_value_t = false)]
        verify: bool,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Littlewood-Richardson branching to a block Levi subgroup.
    Branch {
        #[arg(long)]
        tuple: String,
        /// Ordered partition of the tuple length, e.g. "2,1".
        #[arg(long)]
        parts: String,
    },
    /// Cauchy decomposition of Sym^e(V_a (x) V_b).
    Cauchy {
        #[arg(long)]
        power: u64,
        #[arg(long = "rank-a")]
        rank_a: usize,
        #[arg(long = "rank-b")]
        rank_b: usize,
    },
    /// Plethysm Sym^e(Sym^2 V_a).
    Plethysm {
        #[arg(long)]
        power: u64,
        #[arg(long)]
        rank: usize,
    },
    /// Admissibility depth of a weight.
    Admissible {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        weight: String,
    },
}

#[derive(Debug, Subcommand)]
enum CrystalAction {
    /// Epsilon matrices, Frobenius valuations, and exponents.
    Show {
        #[command(flatten)]
        datum: DatumArg,
        /// Also report the literal orbit-sum exponent and any discrepancy.
        #[arg(long = "lemma-literal", default_value_t = false)]
        lemma_literal: bool,
    },
    /// Run the crystal-level identities and report pass/fail per check.
    Verify {
        #[command(flatten)]
        datum: DatumArg,
    },
}

#[derive(Debug, Subcommand)]
enum ThetaAction {
    /// Apply one operator to a weight.
    Apply {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        weight: String,
        /// Operator spec, e.g. "theta-basic@sigma=tau+taustar@tau_bar=tau".
        #[arg(long)]
        op: String,
    },
    /// Applicability test with reason.
    Check {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        weight: String,
        #[arg(long)]
        op: String,
    },
    /// Weight-level consistency of the two continuation routes.
    Compare {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        weight: String,
        #[arg(long = "tau-bar")]
        tau_bar: String,
    },
    /// Closure of good weights under the twisted operator step.
    Closure {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        weight: String,
        /// Support set, ids joined with '+'; defaults to all embeddings.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long = "tau-bar")]
        tau_bar: String,
    },
    /// Breadth-first weight graph under a generator set.
    Cycles {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        weight: String,
        /// Generator specs; repeatable.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Debug, Subcommand)]
enum GaloisAction {
    /// Deduplicated BFS of twist states.
    Orbit {
        #[command(flatten)]
        datum: DatumArg,
        #[arg(long)]
        weight: String,
        /// Generator specs; defaults to the built-in generator set.
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

/// Run the CLI on an argv slice (excluding the binary name is fine; it is
/// re-inserted).
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut full: Vec<String> = vec!["mutheta".into()];
    full.extend(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return CommandResult {
                exit_code: code,
                payload: if code == 0 { e.to_string() } else { String::new() },
                diagnostics: if code == 0 { vec![] } else { vec![e.to_string()] },
            };
        }
    };
    match dispatch(cli.command) {
        Ok(payload) => CommandResult::ok(payload),
        Err(e) => CommandResult::fail(e.code(), e.message().to_string()),
    }
}

fn load_datum(path: &str) -> Result<ShimuraDatum, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
    Ok(ShimuraDatum::parse_str(&text)?)
}

fn parse_weight(datum: &ShimuraDatum, text: &str) -> Result<Weight, CliError> {
    Ok(Weight::parse(datum, text)?)
}

fn parse_id_set(datum: &ShimuraDatum, text: &str) -> Result<BTreeSet<String>, CliError> {
    let mut out = BTreeSet::new();
    for id in text.split('+').filter(|s| !s.is_empty()) {
        if !datum.contains(id) {
            return Err(CliError::Domain(format!("unknown embedding `{id}`")));
        }
        out.insert(id.to_string());
    }
    Ok(out)
}

/// Parse an operator spec: `kind@key=value@...`. Sets join ids with '+',
/// weights use the weight text syntax.
fn parse_op_spec(datum: &ShimuraDatum, spec: &str) -> Result<OperatorDescriptor, CliError> {
    let mut parts = spec.split('@');
    let kind = parts.next().unwrap_or_default();
    let mut keys: BTreeMap<String, String> = BTreeMap::new();
    for kv in parts {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("bad op argument `{kv}`")))?;
        keys.insert(k.to_string(), v.to_string());
    }
    let all_sigma = || -> BTreeSet<String> { datum.embedding_ids().map(str::to_string).collect() };
    let sigma = match keys.get("sigma") {
        Some(text) => parse_id_set(datum, text)?,
        None => all_sigma(),
    };
    let lambda = match keys.get("lambda") {
        Some(text) => Some(parse_weight(datum, text)?),
        None => None,
    };
    let need_lambda =
        |lambda: Option<Weight>| lambda.ok_or_else(|| CliError::Parse("missing lambda=".into()));
    let need_tau_bar = || -> Result<String, CliError> {
        keys.get("tau_bar")
            .cloned()
            .ok_or_else(|| CliError::Parse("missing tau_bar=".into()))
    };
    let kind = match kind {
        "maass" => OperatorKind::MaassShimura {
            lambda: need_lambda(lambda)?,
        },
        "theta-basic" => OperatorKind::ThetaBasic {
            sigma,
            tau_bar: need_tau_bar()?,
        },
        "theta" => {
            let variant = match keys.get("variant").map(String::as_str) {
                None | Some("general") => ThetaVariant::General,
                Some("allgood") => ThetaVariant::AllGood,
                Some(other) => {
                    return Err(CliError::Parse(format!("unknown variant `{other}`")))
                }
            };
            OperatorKind::Theta {
                sigma,
                lambda: need_lambda(lambda)?,
                variant,
            }
        }
        "theta-omol" => OperatorKind::ThetaOmol {
            lambda: need_lambda(lambda)?,
        },
        "theta-tilde-basic" => OperatorKind::ThetaTildeBasic {
            sigma,
            tau_bar: need_tau_bar()?,
        },
        "theta-tilde" => OperatorKind::ThetaTilde {
            sigma,
            lambda: need_lambda(lambda)?,
        },
        "hasse" => {
            let exponents: BTreeMap<String, i64> = match keys.get("exponents") {
                Some(text) => {
                    let mut out = BTreeMap::new();
                    for item in text.split('+').filter(|s| !s.is_empty()) {
                        let (id, b) = item
                            .split_once(':')
                            .ok_or_else(|| CliError::Parse(format!("bad exponent `{item}`")))?;
                        let b: i64 = b
                            .parse()
                            .map_err(|e| CliError::Parse(format!("bad exponent `{item}`: {e}")))?;
                        if !datum.contains(id) {
                            return Err(CliError::Domain(format!("unknown embedding `{id}`")));
                        }
                        out.insert(id.to_string(), b);
                    }
                    out
                }
                None => sigma.iter().map(|id| (id.clone(), 1)).collect(),
            };
            OperatorKind::HasseMult { exponents }
        }
        "mu-projector" => OperatorKind::MuOrdinaryProjector,
        other => return Err(CliError::Parse(format!("unknown operator kind `{other}`"))),
    };
    Ok(OperatorDescriptor::new(kind))
}

fn weight_to_json(w: &Weight) -> Value {
    serde_json::to_value(w).expect("weight serializes")
}

fn expansion_to_json(exp: &schur::SchurExpansion) -> Value {
    let terms: Vec<Value> = exp
        .terms
        .iter()
        .map(|(label, mult)| json!({"label": label.to_string(), "mult": mult}))
        .collect();
    json!({
        "terms": terms,
        "multiplicity_free": exp.multiplicity_free(),
    })
}

fn node_budget() -> usize {
    std::env::var("THETA_NODE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(theta::DEFAULT_NODE_BUDGET)
}

fn parse_tuple(text: &str) -> Result<Vec<i64>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| CliError::Parse(format!("bad tuple entry `{x}`: {e}")))
        })
        .collect()
}

fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Datum { action } => match action {
            DatumAction::Dump { datum } => {
                let d = load_datum(&datum.datum)?;
                Ok(d.to_canonical_json())
            }
            DatumAction::Check { datum } => {
                let d = load_datum(&datum.datum)?;
                Ok(pretty(json!({
                    "schema": SCHEMA,
                    "valid": true,
                    "case": d.case().to_string(),
                    "n": d.n(),
                    "p": d.p(),
                    "orbits": d.orbits().len(),
                })))
            }
        },
        Command::Polygon { datum, format } => {
            let d = load_datum(&datum.datum)?;
            let mut orbits = Vec::new();
            let mut render = String::new();
            for oi in 0..d.orbits().len() {
                let poly = polygon::orbit_polygon(&d, oi)?;
                let slopes: Vec<String> = poly.slopes().iter().map(|s| s.to_string()).collect();
                orbits.push(json!({"orbit": oi, "slopes": slopes}));
                let pts: Vec<String> = poly
                    .breakpoints()
                    .iter()
                    .map(|(x, y)| format!("({x}, {y})"))
                    .collect();
                render.push_str(&format!("orbit {oi}: {}\n", pts.join(" -> ")));
            }
            let ordinary = polygon::is_ordinary(&d)?;
            match format.format.as_str() {
                "json" => Ok(pretty(json!({
                    "schema": SCHEMA,
                    "orbits": orbits,
                    "ordinary": ordinary,
                }))),
                "table" => Ok(format!("{render}ordinary: {ordinary}\n")),
                other => Err(CliError::Usage(format!("unsupported format `{other}`"))),
            }
        }
        Command::Classify {
            datum,
            weight,
            weight_file,
        } => {
            let d = load_datum(&datum.datum)?;
            let kappa = match (weight, weight_file) {
                (Some(text), None) => parse_weight(&d, &text)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
                    let w: Weight = serde_json::from_str(&text)
                        .map_err(|e| CliError::Parse(format!("bad weight JSON: {e}")))?;
                    w.check_against(&d)
                        .map_err(|e| CliError::Domain(e.to_string()))?;
                    w
                }
                _ => return Err(CliError::Usage("need exactly one of --weight/--weight-file".into())),
            };
            let flags = weights::classify(&d, &kappa)?;
            let stats = weights::weight_stats(&d, &kappa).ok();
            let stats_json = stats.map(|s| {
                json!({
                    "d": s.d,
                    "total": s.total,
                    "norm": s.norm,
                    "det_power": s.det_power.iter()
                        .map(|(k, v)| (k.clone(), v.to_string()))
                        .collect::<BTreeMap<String, String>>(),
                })
            });
            Ok(pretty(json!({
                "schema": SCHEMA,
                "weight": weight_to_json(&kappa),
                "flags": flags,
                "stats": stats_json,
            })))
        }
        Command::Schur { action } => match action {
            SchurAction::Dim {
                rank,
                tuple,
                verify,
                trials,
                seed,
            } => {
                let tuple = parse_tuple(&tuple)?;
                let dim = schur::weyl_dim(rank, &tuple)?;
                let mut body = json!({
                    "schema": SCHEMA,
                    "rank": rank,
                    "tuple": tuple,
                    "dim": dim.to_string(),
                });
                if verify {
                    let brute = schur::brute_force_dim(rank, &tuple)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let det_ok = schur::det_power_check(rank, &tuple, trials, &mut rng)?;
                    body["brute_force_dim"] = json!(brute.to_string());
                    body["brute_force_matches"] = json!(brute == dim);
                    body["det_power_check"] = json!(det_ok);
                    if brute != dim || !det_ok {
                        return Err(CliError::Domain(format!(
                            "verification failed: {}",
                            pretty(body)
                        )));
                    }
                }
                Ok(pretty(body))
            }
            SchurAction::Branch { tuple, parts } => {
                let tuple = parse_tuple(&tuple)?;
                let parts: Vec<usize> = parse_tuple(&parts)?
                    .into_iter()
                    .map(|x| usize::try_from(x).map_err(|_| CliError::Parse("negative part".into())))
                    .collect::<Result<_, _>>()?;
                let exp = schur::branch_to_levi(&tuple, &parts)?;
                let quotient = schur::canonical_quotient(&tuple, &parts)?;
                let mut body = expansion_to_json(&exp);
                body["schema"] = json!(SCHEMA);
                body["canonical_quotient"] = json!(quotient);
                Ok(pretty(body))
            }
            SchurAction::Cauchy {
                power,
                rank_a,
                rank_b,
            } => {
                let exp = schur::cauchy_sym_power(power, rank_a, rank_b);
                let mut body = expansion_to_json(&exp);
                body["schema"] = json!(SCHEMA);
                Ok(pretty(body))
            }
            SchurAction::Plethysm { power, rank } => {
                let exp = schur::plethysm_sym_sym2(power, rank);
                let mut body = expansion_to_json(&exp);
                body["schema"] = json!(SCHEMA);
                Ok(pretty(body))
            }
            SchurAction::Admissible { datum, weight } => {
                let d = load_datum(&datum.datum)?;
                let kappa = parse_weight(&d, &weight)?;
                let depth = schur::admissible_depth(&d, &kappa);
                Ok(pretty(json!({
                    "schema": SCHEMA,
                    "weight": weight_to_json(&kappa),
                    "admissible": depth.is_some(),
                    "depth": depth,
                })))
            }
        },
        Command::Crystal { action } => match action {
            CrystalAction::Show {
                datum,
                lemma_literal,
            } => {
                let d = load_datum(&datum.datum)?;
                let mut orbits = Vec::new();
                for oi in 0..d.orbits().len() {
                    let c = crystal::standard_crystal(&d, oi)?;
                    let mut valuations = BTreeMap::new();
                    let mut c_exps = BTreeMap::new();
                    let mut a_exps = BTreeMap::new();
                    let mut literal = BTreeMap::new();
                    for tau in &d.orbits()[oi].members {
                        valuations
                            .insert(tau.clone(), crystal::phi_valuations(&c, tau)?);
                        if d.f(tau).unwrap_or(0) > 0 {
                            let value = crystal::c_exponent(&d, tau)?;
                            c_exps.insert(tau.clone(), value);
                            if lemma_literal {
                                let lit = crystal::c_exponent_lemma_literal(&d, tau)?;
                                literal.insert(
                                    tau.clone(),
                                    json!({"value": lit, "agrees": lit == value}),
                                );
                            }
                        }
                        if crystal::a_exponent(&d, tau).is_ok() {
                            a_exps.insert(tau.clone(), crystal::a_exponent(&d, tau)?);
                        }
                    }
                    let mut entry = json!({
                        "orbit": oi,
                        "members": d.orbits()[oi].members,
                        "epsilon": c.epsilon(),
                        "valuations": valuations,
                        "c": c_exps,
                        "a": a_exps,
                    });
                    if lemma_literal {
                        entry["lemma_literal"] = json!(literal);
                    }
                    orbits.push(entry);
                }
                Ok(pretty(json!({"schema": SCHEMA, "orbits": orbits})))
            }
            CrystalAction::Verify { datum } => {
                let d = load_datum(&datum.datum)?;
                let mut checks = Vec::new();
                let mut all_pass = true;
                let mut push = |name: &str, pass: bool, details: String| {
                    checks.push(json!({"name": name, "pass": pass, "details": details}));
                };
                for oi in 0..d.orbits().len() {
                    let c = crystal::standard_crystal(&d, oi)?;
                    let orbit = &d.orbits()[oi];
                    // Slope sum at the crystal level.
                    let total: u64 = crystal::phi_valuations(&c, &orbit.members[0])?
                        .iter()
                        .sum();
                    let expected: u64 = orbit
                        .members
                        .iter()
                        .map(|m| u64::from(d.f(m).unwrap_or(0)))
                        .sum();
                    let pass = total == expected;
                    all_pass &= pass;
                    push(
                        "slope-sum",
                        pass,
                        format!("orbit {oi}: {total} vs {expected}"),
                    );
                    for tau in &orbit.members {
                        if d.f(tau).unwrap_or(0) == 0 {
                            continue;
                        }
                        let by_valuations = crystal::c_exponent(&d, tau)?;
                        let by_slope_sum = crystal::c_exponent_slope_sum(&d, tau)?;
                        let by_dense = crystal::dense_c_exponent(&d, tau).ok();
                        let pass = by_valuations == by_slope_sum
                            && by_dense.is_none_or(|v| v == by_valuations);
                        all_pass &= pass;
                        push(
                            "c-exponent",
                            pass,
                            format!(
                                "{tau}: valuations {by_valuations}, slope-sum {by_slope_sum}, dense {by_dense:?}"
                            ),
                        );
                        let ranks = crystal::slope_graded_ranks(&c, tau)?;
                        let filtration = polygon::filtration_ranks(&d, tau)?;
                        let pass = ranks == filtration
                            && ranks.iter().map(|&x| u64::from(x)).sum::<u64>()
                                == u64::from(d.f(tau).unwrap_or(0));
                        all_pass &= pass;
                        push(
                            "filtration-ranks",
                            pass,
                            format!("{tau}: crystal {ranks:?}, polygon {filtration:?}"),
                        );
                    }
                    if let Some(minpos) = d.min_positive_f(oi) {
                        for tau in &orbit.members {
                            if d.f(tau).unwrap_or(0) != minpos {
                                continue;
                            }
                            let c_val = crystal::c_exponent(&d, tau)?;
                            let a_val = crystal::a_exponent(&d, tau)?;
                            let pass = c_val == u64::from(minpos) * a_val;
                            all_pass &= pass;
                            push(
                                "c-equals-f-times-a",
                                pass,
                                format!("{tau}: c {c_val}, f*a {}", u64::from(minpos) * a_val),
                            );
                            for j in 1..=orbit.size() {
                                let pass = crystal::verschiebung_image_check(&d, &c, tau, j)?;
                                all_pass &= pass;
                                push("verschiebung-image", pass, format!("{tau}: j = {j}"));
                            }
                        }
                    }
                }
                let body = pretty(json!({
                    "schema": SCHEMA,
                    "checks": checks,
                    "pass": all_pass,
                }));
                if all_pass {
                    Ok(body)
                } else {
                    Err(CliError::Domain(body))
                }
            }
        },
        Command::Theta { action } => match action {
            ThetaAction::Apply { datum, weight, op } => {
                let d = load_datum(&datum.datum)?;
                let kappa = parse_weight(&d, &weight)?;
                let op = parse_op_spec(&d, &op)?;
                let result = theta::apply(&d, &op, &kappa)?;
                Ok(pretty(json!({
                    "schema": SCHEMA,
                    "operator": op.label(),
                    "source": weight_to_json(&kappa),
                    "target": weight_to_json(&result.target),
                    "target_text": result.target.to_text(),
                    "ledger": {
                        "lambda_piece": weight_to_json(&result.ledger.lambda_piece),
                        "hasse_piece": weight_to_json(&result.ledger.hasse_piece),
                        "twist_piece": weight_to_json(&result.ledger.twist_piece),
                        "lambda_prime": result.ledger.lambda_prime.as_ref().map(weight_to_json),
                        "witnesses": result.ledger.witnesses,
                        "kills_maass_shimura_image": result.ledger.kills_maass_shimura_image,
                    },
                })))
            }
            ThetaAction::Check { datum, weight, op } => {
                let d = load_datum(&datum.datum)?;
                let kappa = parse_weight(&d, &weight)?;
                let op = parse_op_spec(&d, &op)?;
                let result = theta::applicable(&d, &op, &kappa)?;
                Ok(pretty(json!({
                    "schema": SCHEMA,
                    "operator": op.label(),
                    "weight": weight_to_json(&kappa),
                    "applicable": result.ok,
                    "reason": result.reason,
                })))
            }
            ThetaAction::Compare {
                datum,
                weight,
                tau_bar,
            } => {
                let d = load_datum(&datum.datum)?;
                let kappa = parse_weight(&d, &weight)?;
                let consistent = theta::compare_weight_consistency(&d, &kappa, &tau_bar)?;
                Ok(pretty(json!({
                    "schema": SCHEMA,
                    "weight": weight_to_json(&kappa),
                    "tau_bar": tau_bar,
                    "consistent": consistent,
                })))
            }
            ThetaAction::Closure {
                datum,
                weight,
                sigma,
                tau_bar,
            } => {
                let d = load_datum(&datum.datum)?;
                let kappa = parse_weight(&d, &weight)?;
                let sigma = match sigma {
                    Some(text) => parse_id_set(&d, &text)?,
                    None => d.embedding_ids().map(str::to_string).collect(),
                };
                let closed = theta::tilde_closure_check(&d, &sigma, &kappa, &tau_bar)?;
                Ok(pretty(json!({
                    "schema": SCHEMA,
                    "weight": weight_to_json(&kappa),
                    "sigma": sigma,
                    "tau_bar": tau_bar,
                    "closed": closed,
                })))
            }
            ThetaAction::Cycles {
                datum,
                weight,
                gens,
                depth,
                format,
            } => {
                let d = load_datum(&datum.datum)?;
                let kappa = parse_weight(&d, &weight)?;
                let gens: Vec<OperatorDescriptor> = gens
                    .iter()
                    .map(|g| parse_op_spec(&d, g))
                    .collect::<Result<_, _>>()?;
                let graph = theta::explore_cycles(&d, &kappa, &gens, depth, node_budget())?;
                match format.format.as_str() {
                    "dot" => Ok(graph.to_dot()),
                    "json" => {
                        let nodes: Vec<String> =
                            graph.nodes.iter().map(|n| n.to_text()).collect();
                        let edges: Vec<Value> = graph
                            .edges
                            .iter()
                            .map(|e| json!({"from": e.from, "to": e.to, "label": e.label}))
                            .collect();
                        Ok(pretty(json!({
                            "schema": SCHEMA,
                            "nodes": nodes,
                            "edges": edges,
                            "truncated": graph.truncated,
                        })))
                    }
                    other => Err(CliError::Usage(format!("unsupported format `{other}`"))),
                }
            }
        },
        Command::Galois { action } => match action {
            GaloisAction::Orbit {
                datum,
                weight,
                gens,
                depth,
            } => {
                let d = load_datum(&datum.datum)?;
                let kappa = parse_weight(&d, &weight)?;
                let gens: Vec<OperatorDescriptor> = if gens.is_empty() {
                    galois::default_generators(&d)?
                } else {
                    gens.iter()
                        .map(|g| parse_op_spec(&d, g))
                        .collect::<Result<_, _>>()?
                };
                let orbit =
                    galois::modular_weight_orbit(&d, &kappa, &gens, depth, node_budget())?;
                let states: Vec<Value> = orbit
                    .states
                    .iter()
                    .map(|s| {
                        json!({
                            "weight": weight_to_json(&s.weight),
                            "weight_text": s.weight.to_text(),
                            "exponent": s.cyclo_exponent,
                            "trail": s.trail,
                        })
                    })
                    .collect();
                Ok(pretty(json!({
                    "schema": SCHEMA,
                    "states": states,
                    "truncated": orbit.truncated,
                    "conditional_on_nonvanishing": orbit.conditional_on_nonvanishing,
                })))
            }
        },
    }
}

fn pretty(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("json serializes")
}
