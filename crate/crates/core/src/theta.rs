//! Symbolic calculus of the differential operators: applicability predicates
//! evaluated literally from each theorem's hypotheses, exact weight maps with
//! an additive ledger, consistency checks between the two analytic
//! continuation routes, and a breadth-first theta-cycle explorer.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::datum::{Case, DatumError, ShimuraDatum};
use crate::schur;
use crate::weights::{self, Weight, WeightError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThetaError {
    #[error("operator not applicable: {0}")]
    NotApplicable(String),
    #[error("weight is not supported inside Upsilon")]
    NotSupported,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Datum(#[from] DatumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThetaVariant {
    General,
    AllGood,
}

/// A symbolic differential operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorKind {
    /// The p-adic Maass-Shimura operator D^lambda over the mu-ordinary locus.
    MaassShimura { lambda: Weight },
    /// Basic entire operator Theta_{Sigma,tau_bar}.
    ThetaBasic {
        sigma: BTreeSet<String>,
        tau_bar: String,
    },
    /// Entire operator Theta^lambda_Sigma; the all-good variant carries the
    /// sharper Hasse exponent available when all symmetric weights
    /// supported at Sigma are good.
    Theta {
        sigma: BTreeSet<String>,
        lambda: Weight,
        variant: ThetaVariant,
    },
    /// The operator on sheaves extended over the mu-ordinary locus; raises
    /// by lambda with no Hasse factor.
    ThetaOmol { lambda: Weight },
    /// Basic twisted operator, raising by the Hasse weight and the twisted
    /// delta at tau_bar.
    ThetaTildeBasic {
        sigma: BTreeSet<String>,
        tau_bar: String,
    },
    /// Twisted operator Theta-tilde^lambda: raises by the Upsilon twist of
    /// lambda plus a Hasse factor.
    ThetaTilde {
        sigma: BTreeSet<String>,
        lambda: Weight,
    },
    /// Multiplication by a product of partial Hasse invariants.
    HasseMult { exponents: BTreeMap<String, i64> },
    /// The mu-ordinary projector; weight-neutral, annihilates Maass-Shimura
    /// images.
    MuOrdinaryProjector,
}

/// An operator together with its display label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorDescriptor {
    pub kind: OperatorKind,
}

impl OperatorDescriptor {
    pub fn new(kind: OperatorKind) -> Self {
        OperatorDescriptor { kind }
    }

    pub fn hasse_mult<'a, I: IntoIterator<Item = &'a str>>(sigma: I) -> Self {
        OperatorDescriptor::new(OperatorKind::HasseMult {
            exponents: sigma.into_iter().map(|s| (s.to_string(), 1)).collect(),
        })
    }

    pub fn label(&self) -> String {
        fn set(s: &BTreeSet<String>) -> String {
            s.iter().cloned().collect::<Vec<_>>().join("+")
        }
        match &self.kind {
            OperatorKind::MaassShimura { lambda } => format!("MaassShimura({lambda})"),
            OperatorKind::ThetaBasic { sigma, tau_bar } => {
                format!("ThetaBasic({}; {tau_bar})", set(sigma))
            }
            OperatorKind::Theta {
                sigma,
                lambda,
                variant,
            } => {
                let v = match variant {
                    ThetaVariant::General => "general",
                    ThetaVariant::AllGood => "allgood",
                };
                format!("Theta({}; {lambda}; {v})", set(sigma))
            }
            OperatorKind::ThetaOmol { lambda } => format!("ThetaOMOL({lambda})"),
            OperatorKind::ThetaTildeBasic { sigma, tau_bar } => {
                format!("ThetaTildeBasic({}; {tau_bar})", set(sigma))
            }
            OperatorKind::ThetaTilde { sigma, lambda } => {
                format!("ThetaTilde({}; {lambda})", set(sigma))
            }
            OperatorKind::HasseMult { exponents } => {
                let parts: Vec<String> = exponents
                    .iter()
                    .map(|(id, b)| {
                        if *b == 1 {
                            id.clone()
                        } else {
                            format!("{id}^{b}")
                        }
                    })
                    .collect();
                format!("HasseMult({})", parts.join("*"))
            }
            OperatorKind::MuOrdinaryProjector => "MuOrdinaryProjector".into(),
        }
    }
}

impl std::fmt::Display for OperatorDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Result of an applicability test; `reason` names the first hypothesis that
/// failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Applicability {
    pub ok: bool,
    pub reason: Option<String>,
}

impl Applicability {
    fn yes() -> Self {
        Applicability {
            ok: true,
            reason: None,
        }
    }
    fn no(reason: impl Into<String>) -> Self {
        Applicability {
            ok: false,
            reason: Some(reason.into()),
        }
    }
}

/// Additive ledger of the pieces of a weight map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct WeightLedger {
    pub lambda_piece: Weight,
    pub hasse_piece: Weight,
    pub twist_piece: Weight,
    /// Chosen lambda' for the general Theta variant, with all witnesses.
    pub lambda_prime: Option<Weight>,
    pub witnesses: Vec<String>,
    /// Set on the projector: it annihilates Maass-Shimura images.
    pub kills_maass_shimura_image: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightMapResult {
    pub target: Weight,
    pub ledger: WeightLedger,
}

fn support_of(kappa: &Weight) -> BTreeSet<String> {
    kappa.support().iter().map(|s| s.to_string()).collect()
}

fn check_supported(kappa: &Weight, sigma: &BTreeSet<String>) -> bool {
    support_of(kappa).is_subset(sigma)
}

/// lambda' candidates for Theta(general): lambda itself when positive good,
/// and lambda - delta(tau) for tau in the CM part of Sigma when that
/// difference is dominant positive good. Returns (witness label, lambda').
fn lambda_prime_candidates(
    datum: &ShimuraDatum,
    sigma: &BTreeSet<String>,
    lambda: &Weight,
) -> Result<Vec<(Option<String>, Weight)>, WeightError> {
    let mut out = Vec::new();
    if weights::is_positive_good(datum, lambda)? {
        out.push((None, lambda.clone()));
    }
    for tau in datum.cm_type() {
        if !sigma.contains(tau) {
            continue;
        }
        let delta = weights::delta(datum, tau)?;
        let mut comps = BTreeMap::new();
        let mut ok = true;
        for id in datum.embedding_ids() {
            let a = lambda.component_full(datum, id)?;
            let b = delta.component_full(datum, id)?;
            let diff: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            if diff.windows(2).any(|w| w[0] < w[1]) || diff.iter().any(|&x| x < 0) {
                ok = false;
                break;
            }
            comps.insert(id.to_string(), diff);
        }
        if !ok {
            continue;
        }
        let cand = Weight::new(datum, comps)?;
        if weights::is_positive_good(datum, &cand)? {
            out.push((Some(tau.clone()), cand));
        }
    }
    Ok(out)
}

/// Total Hasse weight added by the ||lambda'|| kappa_ha piece, used to rank
/// lambda' witnesses.
fn norm_hasse_weight(datum: &ShimuraDatum, lambda_prime: &Weight) -> Result<Weight, WeightError> {
    let stats = weights::weight_stats(datum, lambda_prime)?;
    let vector = weights::HasseWeightVector {
        exponents: stats.norm,
    };
    vector.to_weight(datum)
}

/// Literal evaluation of the operator's hypotheses against kappa.
pub fn applicable(
    datum: &ShimuraDatum,
    op: &OperatorDescriptor,
    kappa: &Weight,
) -> Result<Applicability, ThetaError> {
    kappa.check_against(datum)?;
    let res = match &op.kind {
        OperatorKind::MaassShimura { lambda } => {
            if !weights::is_symmetric(datum, lambda)? {
                Applicability::no("lambda not symmetric")
            } else if !lambda.is_zero()
                && lambda
                    .components()
                    .values()
                    .any(|t| t.iter().any(|&x| x < 0))
            {
                Applicability::no("lambda has negative entries")
            } else if schur::admissible_depth(datum, lambda).is_none() {
                Applicability::no("lambda not admissible")
            } else {
                Applicability::yes()
            }
        }
        OperatorKind::ThetaBasic { sigma, tau_bar } => {
            if datum.case() == Case::A && !datum.in_cm_type(tau_bar) {
                Applicability::no(format!("{tau_bar} not in the CM type"))
            } else if !datum.contains(tau_bar) {
                Applicability::no(format!("unknown embedding {tau_bar}"))
            } else if !weights::is_good(datum, kappa)? {
                Applicability::no("kappa not good")
            } else if !check_supported(kappa, sigma) {
                Applicability::no("kappa not supported at Sigma")
            } else {
                Applicability::yes()
            }
        }
        OperatorKind::Theta {
            sigma,
            lambda,
            variant,
        } => {
            if !weights::is_symmetric(datum, lambda)? {
                Applicability::no("lambda not symmetric")
            } else if !check_supported(lambda, sigma) {
                Applicability::no("lambda not supported at Sigma")
            } else if !weights::is_good(datum, kappa)? {
                Applicability::no("kappa not good")
            } else if !check_supported(kappa, sigma) {
                Applicability::no("kappa not supported at Sigma")
            } else {
                match variant {
                    ThetaVariant::General => {
                        if lambda_prime_candidates(datum, sigma, lambda)?.is_empty() {
                            Applicability::no("lambda and lambda-delta(tau) not good")
                        } else {
                            Applicability::yes()
                        }
                    }
                    ThetaVariant::AllGood => {
                        let sigma_refs: Vec<&str> = sigma.iter().map(String::as_str).collect();
                        if !weights::all_symmetric_supported_good(datum, sigma_refs)? {
                            Applicability::no(
                                "not all symmetric weights supported at Sigma are good",
                            )
                        } else {
                            Applicability::yes()
                        }
                    }
                }
            }
        }
        OperatorKind::ThetaOmol { lambda } => {
            let flags_l = weights::classify(datum, lambda)?;
            let flags_k = weights::classify(datum, kappa)?;
            let zero_free = |w: &Weight| -> Result<bool, ThetaError> {
                for id in w.support() {
                    let oi = datum.orbit_index_of(id)?;
                    if datum.orbit_signature(oi).contains(&0) {
                        return Ok(false);
                    }
                }
                Ok(true)
            };
            if !flags_l.symmetric {
                Applicability::no("lambda not symmetric")
            } else if !flags_l.simple {
                Applicability::no("lambda not simple")
            } else if !flags_k.simple {
                Applicability::no("kappa not simple")
            } else if !zero_free(lambda)? || !zero_free(kappa)? {
                Applicability::no("support meets an orbit with a zero signature value")
            } else {
                Applicability::yes()
            }
        }
        OperatorKind::ThetaTildeBasic { sigma, tau_bar } => {
            if !datum.in_cm_type(tau_bar) {
                Applicability::no(format!("{tau_bar} not in the CM type"))
            } else if !datum.orbit_avoids_extremes(datum.orbit_index_of(tau_bar)?) {
                Applicability::no("orbit of tau_bar meets 0 or n")
            } else if !weights::is_good(datum, kappa)? {
                Applicability::no("kappa not good")
            } else if !check_supported(kappa, sigma) {
                Applicability::no("kappa not supported at Sigma")
            } else {
                Applicability::yes()
            }
        }
        OperatorKind::ThetaTilde { sigma, lambda } => {
            let upsilon: BTreeSet<String> =
                datum.upsilon().into_iter().map(str::to_string).collect();
            let flags_l = weights::classify(datum, lambda)?;
            if upsilon.is_empty() {
                Applicability::no("Upsilon is empty")
            } else if !upsilon.is_subset(sigma) {
                Applicability::no("Sigma does not contain Upsilon")
            } else if !flags_l.symmetric {
                Applicability::no("lambda not symmetric")
            } else if !flags_l.simple {
                Applicability::no("lambda not simple")
            } else if !weights::is_good(datum, kappa)? {
                Applicability::no("kappa not good")
            } else if !check_supported(kappa, sigma) {
                Applicability::no("kappa not supported at Sigma")
            } else {
                Applicability::yes()
            }
        }
        OperatorKind::HasseMult { exponents } => {
            if exponents.values().any(|&b| b < 0) {
                Applicability::no("negative Hasse exponent")
            } else {
                Applicability::yes()
            }
        }
        OperatorKind::MuOrdinaryProjector => Applicability::yes(),
    };
    Ok(res)
}

/// The exact weight map of an operator on kappa. The target always equals
/// kappa plus the ledger pieces.
pub fn apply(
    datum: &ShimuraDatum,
    op: &OperatorDescriptor,
    kappa: &Weight,
) -> Result<WeightMapResult, ThetaError> {
    let check = applicable(datum, op, kappa)?;
    if !check.ok {
        return Err(ThetaError::NotApplicable(check.reason.unwrap_or_default()));
    }
    let mut ledger = WeightLedger::default();
    match &op.kind {
        OperatorKind::MaassShimura { lambda } => {
            ledger.lambda_piece = lambda.clone();
        }
        OperatorKind::ThetaBasic { sigma, tau_bar } => {
            let sigma_refs = sigma.iter().map(String::as_str);
            ledger.hasse_piece = weights::hasse_weight(datum, sigma_refs)?;
            ledger.lambda_piece = weights::delta_at(datum, tau_bar)?;
        }
        OperatorKind::Theta {
            sigma,
            lambda,
            variant,
        } => {
            ledger.lambda_piece = lambda.clone();
            let stats = weights::weight_stats(datum, lambda)?;
            assert!(stats.total % 2 == 0, "symmetric weights have even size");
            let half = stats.total / 2;
            let sigma_refs = sigma.iter().map(String::as_str);
            let mut hasse = weights::hasse_weight(datum, sigma_refs)?.mul_scalar(datum, half)?;
            if *variant == ThetaVariant::General {
                let mut candidates = lambda_prime_candidates(datum, sigma, lambda)?;
                ledger.witnesses = candidates
                    .iter()
                    .map(|(w, _)| w.clone().unwrap_or_else(|| "lambda".into()))
                    .collect();
                // lambda' = lambda whenever lambda itself is good; otherwise
                // the lambda - delta(tau) witness minimizing the added Hasse
                // weight, ties broken by the canonical embedding order.
                let chosen = if candidates[0].0.is_none() {
                    0
                } else {
                    let mut best = 0usize;
                    let mut best_total = i64::MAX;
                    for (idx, (_, cand)) in candidates.iter().enumerate() {
                        let total: i64 = norm_hasse_weight(datum, cand)?
                            .components()
                            .values()
                            .flat_map(|t| t.iter().copied())
                            .sum();
                        if total < best_total {
                            best_total = total;
                            best = idx;
                        }
                    }
                    best
                };
                let (_, cand) = candidates.swap_remove(chosen);
                let added = norm_hasse_weight(datum, &cand)?;
                ledger.lambda_prime = Some(cand);
                hasse = hasse.add(datum, &added)?;
            }
            ledger.hasse_piece = hasse;
        }
        OperatorKind::ThetaOmol { lambda } => {
            ledger.lambda_piece = lambda.clone();
        }
        OperatorKind::ThetaTildeBasic { sigma, tau_bar } => {
            let sigma_refs = sigma.iter().map(String::as_str);
            ledger.hasse_piece = weights::hasse_weight(datum, sigma_refs)?;
            ledger.twist_piece = weights::delta_twist(datum, tau_bar)?;
        }
        OperatorKind::ThetaTilde { sigma, lambda } => {
            let stats = weights::weight_stats(datum, lambda)?;
            assert!(stats.total % 2 == 0, "symmetric weights have even size");
            let half = stats.total / 2;
            let sigma_refs = sigma.iter().map(String::as_str);
            ledger.hasse_piece =
                weights::hasse_weight(datum, sigma_refs)?.mul_scalar(datum, half)?;
            ledger.twist_piece = weights::upsilon_twist(datum, lambda)?;
        }
        OperatorKind::HasseMult { exponents } => {
            let vector = weights::HasseWeightVector {
                exponents: exponents.clone(),
            };
            ledger.hasse_piece = vector.to_weight(datum)?;
        }
        OperatorKind::MuOrdinaryProjector => {
            ledger.kills_maass_shimura_image = true;
        }
    }
    let target = kappa
        .add(datum, &ledger.lambda_piece)?
        .add(datum, &ledger.hasse_piece)?
        .add(datum, &ledger.twist_piece)?;
    Ok(WeightMapResult { target, ledger })
}

/// A chain of operators applied in order; `zero` is set when a projector is
/// applied directly after a Maass-Shimura operator with nonzero lambda.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceResult {
    pub steps: Vec<WeightMapResult>,
    pub final_weight: Weight,
    pub zero: bool,
}

pub fn apply_sequence(
    datum: &ShimuraDatum,
    ops: &[OperatorDescriptor],
    kappa: &Weight,
) -> Result<SequenceResult, ThetaError> {
    let mut steps = Vec::new();
    let mut cur = kappa.clone();
    let mut zero = false;
    for (i, op) in ops.iter().enumerate() {
        let step = apply(datum, op, &cur)?;
        if matches!(op.kind, OperatorKind::MuOrdinaryProjector) && i > 0 {
            if let OperatorKind::MaassShimura { lambda } = &ops[i - 1].kind {
                if !lambda.is_zero() {
                    zero = true;
                }
            }
        }
        cur = step.target.clone();
        steps.push(step);
    }
    Ok(SequenceResult {
        steps,
        final_weight: cur,
        zero,
    })
}

/// Weight-level consistency of the two analytic continuation routes for a
/// weight supported inside Upsilon: multiplying the basic route by
/// E^{r(kappa)-1} must land in the same weight as conjugating the
/// over-mu-ordinary operator by the canonical projection and its adjugate.
/// The two sides are computed independently and compared.
pub fn compare_weight_consistency(
    datum: &ShimuraDatum,
    kappa: &Weight,
    tau_bar: &str,
) -> Result<bool, ThetaError> {
    kappa.check_against(datum)?;
    if datum.case() == Case::A && !datum.in_cm_type(tau_bar) {
        return Err(ThetaError::PreconditionViolated(format!(
            "{tau_bar} not in the CM type"
        )));
    }
    let upsilon: BTreeSet<String> = datum.upsilon().into_iter().map(str::to_string).collect();
    if !support_of(kappa).is_subset(&upsilon) {
        return Err(ThetaError::NotSupported);
    }
    let stats = weights::weight_stats(datum, kappa)?;
    let delta_factor = weights::delta(datum, tau_bar)?;

    // Left: E^{r(kappa)-1} . Theta_{support,tau_bar}: Hasse exponent
    // max(r - 1, 0) over Upsilon, plus one Hasse factor at each tau in the
    // support, plus the omega^2 factor.
    let mut left_exponents: BTreeMap<String, i64> = BTreeMap::new();
    for tau in &upsilon {
        let r = stats.det_power[tau].clone();
        let r: i64 = i64::try_from(&r).map_err(|_| WeightError::Overflow)?;
        let e = (r - 1).max(0);
        if e > 0 {
            left_exponents.insert(tau.clone(), e);
        }
    }
    for tau in kappa.support() {
        *left_exponents.entry(tau.to_string()).or_insert(0) += 1;
    }
    let left_hasse = weights::HasseWeightVector {
        exponents: left_exponents,
    }
    .to_weight(datum)?;
    let left = kappa.add(datum, &left_hasse)?.add(datum, &delta_factor)?;

    // Right: adjugate-projection route: E^{r(kappa)} plus the same
    // omega^2 factor.
    let mut right_exponents: BTreeMap<String, i64> = BTreeMap::new();
    for (tau, r) in &stats.det_power {
        let r: i64 = i64::try_from(r).map_err(|_| WeightError::Overflow)?;
        if r != 0 {
            right_exponents.insert(tau.clone(), r);
        }
    }
    let right_hasse = weights::HasseWeightVector {
        exponents: right_exponents,
    }
    .to_weight(datum)?;
    let right = kappa.add(datum, &right_hasse)?.add(datum, &delta_factor)?;

    Ok(left == right)
}

/// Does kappa + kappa_{ha,Sigma} + delta-twist(tau_bar) stay good and
/// supported at Sigma? This is the closure property that lets the twisted
/// operators iterate.
pub fn tilde_closure_check(
    datum: &ShimuraDatum,
    sigma: &BTreeSet<String>,
    kappa: &Weight,
    tau_bar: &str,
) -> Result<bool, ThetaError> {
    let upsilon: BTreeSet<String> = datum.upsilon().into_iter().map(str::to_string).collect();
    if upsilon.is_empty() {
        return Err(ThetaError::PreconditionViolated("Upsilon is empty".into()));
    }
    if !upsilon.is_subset(sigma) {
        return Err(ThetaError::PreconditionViolated(
            "Sigma does not contain Upsilon".into(),
        ));
    }
    if !weights::is_good(datum, kappa)? {
        return Err(ThetaError::PreconditionViolated("kappa not good".into()));
    }
    if !check_supported(kappa, sigma) {
        return Err(ThetaError::PreconditionViolated(
            "kappa not supported at Sigma".into(),
        ));
    }
    if !datum.in_cm_type(tau_bar) || !datum.orbit_avoids_extremes(datum.orbit_index_of(tau_bar)?) {
        return Err(ThetaError::PreconditionViolated(
            "tau_bar does not qualify for the twist".into(),
        ));
    }
    let sigma_refs = sigma.iter().map(String::as_str);
    let target = kappa
        .add(datum, &weights::hasse_weight(datum, sigma_refs)?)?
        .add(datum, &weights::delta_twist(datum, tau_bar)?)?;
    Ok(weights::is_good(datum, &target)? && check_supported(&target, sigma))
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleEdge {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

/// BFS graph of weights under a generator set. Node order is discovery
/// order, which is deterministic for fixed inputs.
#[derive(Debug, Clone, Serialize)]
pub struct CycleGraph {
    pub nodes: Vec<Weight>,
    pub edges: Vec<CycleEdge>,
    /// True when the node budget cut the exploration short.
    pub truncated: bool,
}

pub const DEFAULT_NODE_BUDGET: usize = 10_000;

pub fn explore_cycles(
    datum: &ShimuraDatum,
    start: &Weight,
    generators: &[OperatorDescriptor],
    depth: usize,
    node_budget: usize,
) -> Result<CycleGraph, ThetaError> {
    start.check_against(datum)?;
    let mut nodes: Vec<Weight> = vec![start.clone()];
    let mut index: HashMap<String, usize> = HashMap::from([(start.to_text(), 0)]);
    let mut edges: Vec<CycleEdge> = Vec::new();
    let mut truncated = false;
    let mut frontier: Vec<usize> = vec![0];
    for _ in 0..depth {
        let mut next: Vec<usize> = Vec::new();
        for &node in &frontier {
            let kappa = nodes[node].clone();
            for op in generators {
                if !applicable(datum, op, &kappa)?.ok {
                    continue;
                }
                let result = apply(datum, op, &kappa)?;
                let key = result.target.to_text();
                let to = match index.get(&key) {
                    Some(&i) => i,
                    None => {
                        if nodes.len() >= node_budget {
                            truncated = true;
                            continue;
                        }
                        let i = nodes.len();
                        nodes.push(result.target.clone());
                        index.insert(key, i);
                        next.push(i);
                        i
                    }
                };
                edges.push(CycleEdge {
                    from: node,
                    to,
                    label: op.label(),
                });
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(CycleGraph {
        nodes,
        edges,
        truncated,
    })
}

impl CycleGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for node in &self.nodes {
            out.push_str(&format!("  \"{}\";\n", node.to_text()));
        }
        for edge in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                self.nodes[edge.from].to_text(),
                self.nodes[edge.to].to_text(),
                edge.label
            ));
        }
        out.push_str("}\n");
        out
    }
}
