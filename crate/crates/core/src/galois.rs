//! Bookkeeping for the interaction with Hecke operators: the similitude
//! exponent picked up when a theta-type operator moves past a Hecke
//! operator, and the resulting cyclotomic-twist ledger on weights of
//! modularity. Every edge is conditional on nonvanishing of the operator on
//! the underlying form, which the weight calculus cannot decide.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::datum::ShimuraDatum;
use crate::theta::{self, OperatorDescriptor, OperatorKind, ThetaError};
use crate::weights::{self, Weight, WeightError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaloisError {
    #[error("weight is not symmetric")]
    NotSymmetric,
    #[error("weight is not positive")]
    NotPositive,
    #[error("no Galois edge for {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// The exponent |lambda|/2 of the similitude factor in the commutation
/// relation of a theta-type operator with a Hecke operator.
pub fn hecke_exponent(datum: &ShimuraDatum, lambda: &Weight) -> Result<u64, GaloisError> {
    if !weights::is_symmetric(datum, lambda)? {
        return Err(GaloisError::NotSymmetric);
    }
    let stats = weights::weight_stats(datum, lambda).map_err(|e| match e {
        WeightError::NotPositive => GaloisError::NotPositive,
        other => GaloisError::Weight(other),
    })?;
    assert!(stats.total % 2 == 0, "symmetric weights have even size");
    Ok((stats.total / 2) as u64)
}

/// A weight of modularity together with the accumulated power of the twist
/// by the cyclotomic character, and the operator trail that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistState {
    pub weight: Weight,
    pub cyclo_exponent: u64,
    pub trail: Vec<String>,
}

impl TwistState {
    pub fn start(weight: Weight) -> Self {
        TwistState {
            weight,
            cyclo_exponent: 0,
            trail: Vec::new(),
        }
    }
}

/// Apply one operator to a twist state. Theta and Theta-tilde add
/// |lambda|/2 to the exponent; Hasse multiplication changes the weight only;
/// no other kind produces a Galois edge.
pub fn galois_edge(
    datum: &ShimuraDatum,
    state: &TwistState,
    op: &OperatorDescriptor,
) -> Result<TwistState, GaloisError> {
    let added = match &op.kind {
        OperatorKind::Theta { lambda, .. } | OperatorKind::ThetaTilde { lambda, .. } => {
            hecke_exponent(datum, lambda)?
        }
        OperatorKind::HasseMult { .. } => 0,
        other => {
            return Err(GaloisError::NotApplicable(
                OperatorDescriptor::new(other.clone()).label(),
            ))
        }
    };
    let result = theta::apply(datum, op, &state.weight)?;
    let mut trail = state.trail.clone();
    trail.push(op.label());
    Ok(TwistState {
        weight: result.target,
        cyclo_exponent: state.cyclo_exponent + added,
        trail,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitResult {
    pub states: Vec<TwistState>,
    pub truncated: bool,
    /// Every edge assumes the operator is nonzero on the underlying form.
    pub conditional_on_nonvanishing: bool,
}

pub const DEFAULT_STATE_BUDGET: usize = 10_000;

/// Deduplicated BFS over twist states reachable from kappa within `depth`
/// steps of the given generators. States are keyed by (weight, exponent);
/// the first trail found is kept.
pub fn modular_weight_orbit(
    datum: &ShimuraDatum,
    start: &Weight,
    generators: &[OperatorDescriptor],
    depth: usize,
    state_budget: usize,
) -> Result<OrbitResult, GaloisError> {
    start.check_against(datum).map_err(GaloisError::Weight)?;
    let root = TwistState::start(start.clone());
    let mut states = vec![root];
    let mut seen: HashMap<(String, u64), usize> =
        HashMap::from([((start.to_text(), 0u64), 0usize)]);
    let mut frontier = vec![0usize];
    let mut truncated = false;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            let state = states[idx].clone();
            for op in generators {
                match galois_edge(datum, &state, op) {
                    Ok(new_state) => {
                        let key = (new_state.weight.to_text(), new_state.cyclo_exponent);
                        if seen.contains_key(&key) {
                            continue;
                        }
                        if states.len() >= state_budget {
                            truncated = true;
                            continue;
                        }
                        seen.insert(key, states.len());
                        next.push(states.len());
                        states.push(new_state);
                    }
                    Err(GaloisError::Theta(ThetaError::NotApplicable(_)))
                    | Err(GaloisError::NotApplicable(_))
                    | Err(GaloisError::NotSymmetric) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(OrbitResult {
        states,
        truncated,
        conditional_on_nonvanishing: true,
    })
}

/// Default generator set for orbit exploration: Theta-tilde at each twist of
/// the basic symmetric weights delta(tau_bar), plus single partial-Hasse
/// multiplications.
pub fn default_generators(datum: &ShimuraDatum) -> Result<Vec<OperatorDescriptor>, GaloisError> {
    let sigma: BTreeSet<String> = datum.embedding_ids().map(str::to_string).collect();
    let mut gens = Vec::new();
    for tau in datum.cm_type() {
        let delta = weights::delta(datum, tau)?;
        if weights::classify(datum, &delta)?.simple {
            gens.push(OperatorDescriptor::new(OperatorKind::ThetaTilde {
                sigma: sigma.clone(),
                lambda: delta.clone(),
            }));
        }
        gens.push(OperatorDescriptor::new(OperatorKind::Theta {
            sigma: sigma.clone(),
            lambda: delta,
            variant: theta::ThetaVariant::General,
        }));
    }
    for id in datum.embedding_ids() {
        gens.push(OperatorDescriptor::hasse_mult([id]));
    }
    Ok(gens)
}
