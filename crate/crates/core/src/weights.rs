//! Dominant weights and the predicates of the weight calculus: scalar,
//! parallel, positive, symmetric, sum-symmetric, good, simple; the derived
//! scalars d, |kappa|, ||kappa||, r(kappa); Hasse-invariant weights; and the
//! Upsilon twist that collapses a simple weight onto orbit base points with
//! p-power coefficients.
//!
//! A weight stores one non-increasing integer tuple of length f(tau) per
//! embedding; missing components are zero. All arithmetic is checked.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datum::{Case, DatumError, ShimuraDatum};
use crate::schur;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("component at `{id}` has length {got}, expected f = {expected}")]
    LengthMismatch {
        id: String,
        expected: usize,
        got: usize,
    },
    #[error("component at `{0}` is not dominant")]
    NotDominant(String),
    #[error("weight is not positive")]
    NotPositive,
    #[error("weight is not simple")]
    NotSimple,
    #[error("orbit of `{0}` has no Upsilon base point (its signature meets 0 or n)")]
    UpsilonEmpty(String),
    #[error("`{0}` is not in the CM type")]
    NotInCmType(String),
    #[error("integer overflow in weight arithmetic")]
    Overflow,
    #[error("cannot parse weight: {0}")]
    Parse(String),
    #[error(transparent)]
    Datum(#[from] DatumError),
}

/// A dominant weight: per-embedding non-increasing integer tuples. All-zero
/// components are stripped, so equality is canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Weight {
    components: BTreeMap<String, Vec<i64>>,
}

impl Weight {
    pub fn zero() -> Self {
        Weight::default()
    }

    /// Build and validate against a datum: components must be keyed by known
    /// embeddings, have length exactly f(tau), and be non-increasing.
    pub fn new(
        datum: &ShimuraDatum,
        components: BTreeMap<String, Vec<i64>>,
    ) -> Result<Self, WeightError> {
        let mut kept = BTreeMap::new();
        for (id, tuple) in components {
            let f = datum.f(&id)? as usize;
            if tuple.len() != f {
                return Err(WeightError::LengthMismatch {
                    id,
                    expected: f,
                    got: tuple.len(),
                });
            }
            if tuple.windows(2).any(|w| w[0] < w[1]) {
                return Err(WeightError::NotDominant(id));
            }
            if tuple.iter().any(|&x| x != 0) {
                kept.insert(id, tuple);
            }
        }
        Ok(Weight { components: kept })
    }

    /// Scalar weight with value k_tau at each given embedding.
    pub fn scalar(
        datum: &ShimuraDatum,
        values: &BTreeMap<String, i64>,
    ) -> Result<Self, WeightError> {
        let mut comps = BTreeMap::new();
        for (id, &k) in values {
            let f = datum.f(id)? as usize;
            comps.insert(id.clone(), vec![k; f]);
        }
        Weight::new(datum, comps)
    }

    /// Re-validate against a (possibly different) datum.
    pub fn check_against(&self, datum: &ShimuraDatum) -> Result<(), WeightError> {
        for (id, tuple) in &self.components {
            let f = datum.f(id)? as usize;
            if tuple.len() != f {
                return Err(WeightError::LengthMismatch {
                    id: id.clone(),
                    expected: f,
                    got: tuple.len(),
                });
            }
        }
        Ok(())
    }

    pub fn components(&self) -> &BTreeMap<String, Vec<i64>> {
        &self.components
    }

    /// The tuple at `id`; empty slice when the component is zero or absent.
    pub fn component(&self, id: &str) -> &[i64] {
        self.components.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The tuple at `id` padded with zeros to full length f(tau).
    pub fn component_full(&self, datum: &ShimuraDatum, id: &str) -> Result<Vec<i64>, WeightError> {
        let f = datum.f(id)? as usize;
        let mut v = self.component(id).to_vec();
        v.resize(f, 0);
        Ok(v)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn support(&self) -> BTreeSet<&str> {
        self.components.keys().map(String::as_str).collect()
    }

    pub fn supported_within<'a, I: IntoIterator<Item = &'a str>>(&self, sigma: I) -> bool {
        let set: BTreeSet<&str> = sigma.into_iter().collect();
        self.support().iter().all(|id| set.contains(id))
    }

    pub fn add(&self, datum: &ShimuraDatum, other: &Weight) -> Result<Weight, WeightError> {
        let mut comps: BTreeMap<String, Vec<i64>> = BTreeMap::new();
        let keys: BTreeSet<&String> = self
            .components
            .keys()
            .chain(other.components.keys())
            .collect();
        for id in keys {
            let a = self.component_full(datum, id)?;
            let b = other.component_full(datum, id)?;
            let sum: Option<Vec<i64>> = a
                .iter()
                .zip(&b)
                .map(|(x, y)| x.checked_add(*y))
                .collect();
            comps.insert(id.clone(), sum.ok_or(WeightError::Overflow)?);
        }
        // Sum of dominant tuples is dominant; Weight::new asserts it.
        Weight::new(datum, comps)
    }

    pub fn mul_scalar(&self, datum: &ShimuraDatum, k: i64) -> Result<Weight, WeightError> {
        let mut comps = BTreeMap::new();
        for (id, tuple) in &self.components {
            let scaled: Option<Vec<i64>> = tuple.iter().map(|x| x.checked_mul(k)).collect();
            comps.insert(id.clone(), scaled.ok_or(WeightError::Overflow)?);
        }
        Weight::new(datum, comps)
    }

    /// Shell-friendly text form: `tau:2,2;taustar:5`, or `0` for the zero
    /// weight. Components appear in sorted id order.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.components
            .iter()
            .map(|(id, tuple)| {
                let entries: Vec<String> = tuple.iter().map(|x| x.to_string()).collect();
                format!("{id}:{}", entries.join(","))
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse(datum: &ShimuraDatum, text: &str) -> Result<Weight, WeightError> {
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Ok(Weight::zero());
        }
        let mut comps = BTreeMap::new();
        for part in text.split(';') {
            let (id, entries) = part
                .split_once(':')
                .ok_or_else(|| WeightError::Parse(format!("missing `:` in `{part}`")))?;
            let tuple: Result<Vec<i64>, _> = entries
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect();
            let tuple = tuple.map_err(|e| WeightError::Parse(format!("bad entry in `{part}`: {e}")))?;
            if comps.insert(id.trim().to_string(), tuple).is_some() {
                return Err(WeightError::Parse(format!("duplicate component `{id}`")));
            }
        }
        Weight::new(datum, comps)
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("weight serializes")
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Predicate flags computed literally from the definitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightFlags {
    pub scalar: bool,
    pub parallel: bool,
    pub positive: bool,
    pub supported_at: BTreeSet<String>,
    pub symmetric: bool,
    pub sum_symmetric: bool,
    pub good: bool,
    pub simple: bool,
}

fn is_scalar_tuple(t: &[i64]) -> bool {
    t.windows(2).all(|w| w[0] == w[1])
}

/// Classify a weight against a datum.
pub fn classify(datum: &ShimuraDatum, kappa: &Weight) -> Result<WeightFlags, WeightError> {
    kappa.check_against(datum)?;
    let zero = kappa.is_zero();
    let positive = !zero
        && kappa
            .components
            .values()
            .all(|t| t.iter().all(|&x| x >= 0));

    let scalar = kappa.components.values().all(|t| is_scalar_tuple(t));

    // Parallel: equal scalar value everywhere if scalar, else equal tuples.
    let parallel = if scalar {
        let values: BTreeSet<i64> = datum
            .embedding_ids()
            .filter(|id| datum.f(id).unwrap() > 0)
            .map(|id| kappa.component(id).first().copied().unwrap_or(0))
            .collect();
        values.len() <= 1
    } else {
        let tuples: BTreeSet<Vec<i64>> = datum
            .embedding_ids()
            .filter(|id| datum.f(id).unwrap() > 0)
            .map(|id| kappa.component_full(datum, id).unwrap())
            .collect();
        tuples.len() <= 1
    };

    let symmetric = symmetric_at_all(datum, kappa)?;
    let sum_symmetric = positive && sums_symmetric(datum, kappa)?;
    let good = (zero || positive) && good_scalar_conditions(datum, kappa)?;
    let simple = (zero || positive) && simple_conditions(datum, kappa)?;

    Ok(WeightFlags {
        scalar,
        parallel,
        positive,
        supported_at: kappa.support().iter().map(|s| s.to_string()).collect(),
        symmetric,
        sum_symmetric,
        good,
        simple,
    })
}

fn symmetric_at_all(datum: &ShimuraDatum, kappa: &Weight) -> Result<bool, WeightError> {
    if datum.case() == Case::C {
        return Ok(true);
    }
    for tau in datum.cm_type() {
        let star = datum.star(tau)?;
        let a = kappa.component_full(datum, tau)?;
        let b = kappa.component_full(datum, star)?;
        let m = a.len().min(b.len());
        for i in 0..m {
            if a[i] != b[i] {
                return Ok(false);
            }
        }
        if a[m..].iter().any(|&x| x != 0) || b[m..].iter().any(|&x| x != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sums_symmetric(datum: &ShimuraDatum, kappa: &Weight) -> Result<bool, WeightError> {
    for tau in datum.cm_type() {
        let star = datum.star(tau)?;
        let a: i64 = kappa.component(tau).iter().sum();
        let b: i64 = kappa.component(star).iter().sum();
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

fn good_scalar_conditions(datum: &ShimuraDatum, kappa: &Weight) -> Result<bool, WeightError> {
    for (oi, orbit) in datum.orbits().iter().enumerate() {
        let minpos = datum.min_positive_f(oi);
        for id in &orbit.members {
            let f = datum.f(id)?;
            if f == 0 {
                continue;
            }
            if Some(f) != minpos && !is_scalar_tuple(kappa.component(id)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn simple_conditions(datum: &ShimuraDatum, kappa: &Weight) -> Result<bool, WeightError> {
    for (oi, orbit) in datum.orbits().iter().enumerate() {
        let zero_in_orbit = datum.orbit_signature(oi).contains(&0);
        let minpos = datum.min_positive_f(oi).unwrap_or(0) as usize;
        for id in &orbit.members {
            let comp = kappa.component(id);
            if zero_in_orbit {
                if !comp.is_empty() {
                    return Ok(false);
                }
            } else if comp.iter().skip(minpos).any(|&x| x != 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_good(datum: &ShimuraDatum, kappa: &Weight) -> Result<bool, WeightError> {
    Ok(classify(datum, kappa)?.good)
}

pub fn is_symmetric(datum: &ShimuraDatum, kappa: &Weight) -> Result<bool, WeightError> {
    symmetric_at_all(datum, kappa)
}

pub fn is_simple(datum: &ShimuraDatum, kappa: &Weight) -> Result<bool, WeightError> {
    Ok(classify(datum, kappa)?.simple)
}

/// Good in the strict sense used by operator hypotheses: positive and good.
pub fn is_positive_good(datum: &ShimuraDatum, kappa: &Weight) -> Result<bool, WeightError> {
    let flags = classify(datum, kappa)?;
    Ok(flags.positive && flags.good)
}

/// Derived scalars of a weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightStats {
    /// d_{kappa,tau} per embedding.
    pub d: BTreeMap<String, i64>,
    /// |kappa| = sum of the d's.
    pub total: i64,
    /// ||kappa_tau|| per embedding: |kappa_tau| / a_tau when scalar, else
    /// |kappa_tau|.
    pub norm: BTreeMap<String, i64>,
    /// r(kappa_tau) = |kappa_tau| dim(rho_{kappa_tau}) / a_tau.
    pub det_power: BTreeMap<String, BigInt>,
}

pub fn weight_stats(datum: &ShimuraDatum, kappa: &Weight) -> Result<WeightStats, WeightError> {
    kappa.check_against(datum)?;
    let mut d = BTreeMap::new();
    let mut norm = BTreeMap::new();
    let mut det_power = BTreeMap::new();
    let mut total: i64 = 0;
    for id in datum.embedding_ids() {
        let a = datum.f(id)? as usize;
        let comp = kappa.component_full(datum, id)?;
        let sum: i64 = comp.iter().sum();
        if sum < 0 {
            return Err(WeightError::NotPositive);
        }
        total = total.checked_add(sum).ok_or(WeightError::Overflow)?;
        d.insert(id.to_string(), sum);
        let n = if a == 0 {
            0
        } else if is_scalar_tuple(&comp) {
            sum / a as i64
        } else {
            sum
        };
        norm.insert(id.to_string(), n);
        let r = if a == 0 {
            BigInt::zero()
        } else {
            let dim = schur::weyl_dim(a, &comp).map_err(|_| WeightError::NotDominant(id.into()))?;
            let num = BigInt::from(sum) * dim;
            let (q, rem) = num::Integer::div_rem(&num, &BigInt::from(a as i64));
            debug_assert!(rem.is_zero(), "r(kappa) is integral");
            q
        };
        det_power.insert(id.to_string(), r);
    }
    Ok(WeightStats {
        d,
        total,
        norm,
        det_power,
    })
}

/// (p^{e_tau} - 1) as a checked i64.
pub fn hasse_value(datum: &ShimuraDatum, id: &str) -> Result<i64, WeightError> {
    let e = datum.orbit_size(id)? as u32;
    let p = i64::try_from(datum.p()).map_err(|_| WeightError::Overflow)?;
    let pe = p.checked_pow(e).ok_or(WeightError::Overflow)?;
    Ok(pe - 1)
}

/// The Sigma-partial Hasse weight: scalar value p^{e_tau} - 1 at each tau in
/// Sigma, zero elsewhere.
pub fn hasse_weight<'a, I: IntoIterator<Item = &'a str>>(
    datum: &ShimuraDatum,
    sigma: I,
) -> Result<Weight, WeightError> {
    let mut values = BTreeMap::new();
    for id in sigma {
        values.insert(id.to_string(), hasse_value(datum, id)?);
    }
    Weight::scalar(datum, &values)
}

/// The full Hasse weight kappa_ha over all embeddings.
pub fn full_hasse_weight(datum: &ShimuraDatum) -> Result<Weight, WeightError> {
    hasse_weight(datum, datum.embedding_ids())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HasseConstants {
    /// m_0 = lcm over tau of (p^{e_tau} - 1).
    pub m0: i64,
    /// m_tau = m_0 / (p^{e_tau} - 1).
    pub m: BTreeMap<String, i64>,
}

pub fn hasse_constants(datum: &ShimuraDatum) -> Result<HasseConstants, WeightError> {
    let mut m0: i64 = 1;
    for id in datum.embedding_ids() {
        let v = hasse_value(datum, id)?;
        m0 = num::Integer::lcm(&m0, &v);
    }
    let mut m = BTreeMap::new();
    for id in datum.embedding_ids() {
        m.insert(id.to_string(), m0 / hasse_value(datum, id)?);
    }
    Ok(HasseConstants { m0, m })
}

/// An integer vector of Hasse exponents b_tau, standing for the scalar
/// weight (b_tau (p^{e_tau} - 1))_tau.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct HasseWeightVector {
    pub exponents: BTreeMap<String, i64>,
}

impl HasseWeightVector {
    pub fn to_weight(&self, datum: &ShimuraDatum) -> Result<Weight, WeightError> {
        let mut values = BTreeMap::new();
        for (id, &b) in &self.exponents {
            let v = hasse_value(datum, id)?
                .checked_mul(b)
                .ok_or(WeightError::Overflow)?;
            values.insert(id.clone(), v);
        }
        Weight::scalar(datum, &values)
    }
}

/// The weight delta(tau_bar) of V^2 at tau_bar: in case A, (1,0,...,0) at
/// tau_bar and at tau_bar*; in case C, (2,0,...,0) at tau_bar.
pub fn delta(datum: &ShimuraDatum, tau_bar: &str) -> Result<Weight, WeightError> {
    let mut comps = BTreeMap::new();
    match datum.case() {
        Case::A => {
            if !datum.in_cm_type(tau_bar) {
                return Err(WeightError::NotInCmType(tau_bar.to_string()));
            }
            let star = datum.star(tau_bar)?.to_string();
            for id in [tau_bar.to_string(), star] {
                let f = datum.f(&id)? as usize;
                if f > 0 {
                    let mut t = vec![0i64; f];
                    t[0] = 1;
                    comps.insert(id, t);
                }
            }
        }
        Case::C => {
            let f = datum.f(tau_bar)? as usize;
            let mut t = vec![0i64; f];
            t[0] = 2;
            comps.insert(tau_bar.to_string(), t);
        }
    }
    Weight::new(datum, comps)
}

/// The tau_bar component of delta(tau_bar) alone; the increment recorded for
/// the basic analytic-continuation operator.
pub fn delta_at(datum: &ShimuraDatum, tau_bar: &str) -> Result<Weight, WeightError> {
    let full = delta(datum, tau_bar)?;
    let mut comps = BTreeMap::new();
    if !full.component(tau_bar).is_empty() {
        comps.insert(tau_bar.to_string(), full.component(tau_bar).to_vec());
    }
    Weight::new(datum, comps)
}

/// The Upsilon twist of a simple weight: the component at each orbit base
/// point tau_o becomes sum_{j=0}^{e-1} p^j (first f(tau_o) entries of
/// lambda at tau_o . sigma^j). Simplicity makes the truncation lossless.
pub fn upsilon_twist(datum: &ShimuraDatum, lambda: &Weight) -> Result<Weight, WeightError> {
    if !classify(datum, lambda)?.simple {
        return Err(WeightError::NotSimple);
    }
    let p = i64::try_from(datum.p()).map_err(|_| WeightError::Overflow)?;
    let mut comps: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    for (oi, orbit) in datum.orbits().iter().enumerate() {
        let supported = orbit
            .members
            .iter()
            .any(|m| !lambda.component(m).is_empty());
        if !supported {
            continue;
        }
        let base = datum
            .base_point(oi)
            .ok_or_else(|| WeightError::UpsilonEmpty(orbit.members[0].clone()))?
            .to_string();
        let len = datum.f(&base)? as usize;
        let mut acc = vec![0i64; len];
        let mut power: i64 = 1;
        for j in 0..orbit.size() {
            let member = datum.sigma_shift(&base, j as i64)?;
            let comp = lambda.component_full(datum, member)?;
            debug_assert!(comp.iter().skip(len).all(|&x| x == 0));
            for i in 0..len {
                let term = comp[i].checked_mul(power).ok_or(WeightError::Overflow)?;
                acc[i] = acc[i].checked_add(term).ok_or(WeightError::Overflow)?;
            }
            if j + 1 < orbit.size() {
                power = power.checked_mul(p).ok_or(WeightError::Overflow)?;
            }
        }
        comps.insert(base, acc);
    }
    Weight::new(datum, comps)
}

/// The Upsilon twist of delta(tau_bar).
pub fn delta_twist(datum: &ShimuraDatum, tau_bar: &str) -> Result<Weight, WeightError> {
    let oi = datum.orbit_index_of(tau_bar)?;
    if datum.base_point(oi).is_none() {
        return Err(WeightError::UpsilonEmpty(tau_bar.to_string()));
    }
    // In case A the star orbit must also qualify.
    if datum.case() == Case::A {
        let star_oi = datum.orbit_index_of(datum.star(tau_bar)?)?;
        if datum.base_point(star_oi).is_none() {
            return Err(WeightError::UpsilonEmpty(tau_bar.to_string()));
        }
    }
    upsilon_twist(datum, &delta(datum, tau_bar)?)
}

/// Does a nonzero good symmetric weight exist? Returns a witness when so.
///
/// The search runs over the generating shapes (1,...,1,0,...,0) mirrored on
/// each CM pair; by the scalar/goodness structure of the definitions a
/// witness of any height exists exactly when one of these shapes works.
pub fn good_symmetric_exists(datum: &ShimuraDatum) -> Result<(bool, Option<Weight>), WeightError> {
    if datum.case() == Case::C {
        for id in datum.embedding_ids() {
            if datum.f(id)? > 0 {
                let w = Weight::scalar(datum, &BTreeMap::from([(id.to_string(), 1)]))?;
                return Ok((true, Some(w)));
            }
        }
        return Ok((false, None));
    }
    for tau in datum.cm_type() {
        let star = datum.star(tau)?.to_string();
        let m = datum.f(tau)?.min(datum.f(&star)?) as usize;
        for t in 1..=m {
            let mut comps = BTreeMap::new();
            for id in [tau.clone(), star.clone()] {
                let f = datum.f(&id)? as usize;
                let mut tuple = vec![0i64; f];
                for slot in tuple.iter_mut().take(t) {
                    *slot = 1;
                }
                comps.insert(id, tuple);
            }
            let w = Weight::new(datum, comps)?;
            let flags = classify(datum, &w)?;
            if flags.positive && flags.good && flags.symmetric {
                return Ok((true, Some(w)));
            }
        }
    }
    Ok((false, None))
}

/// True iff every orbit's signature values fit inside {0, j, n} for a single
/// j; in case C always true.
pub fn all_weights_good(datum: &ShimuraDatum) -> bool {
    if datum.case() == Case::C {
        return true;
    }
    (0..datum.orbits().len()).all(|oi| {
        let interior: BTreeSet<u32> = datum
            .orbit_signature(oi)
            .into_iter()
            .filter(|&f| f != 0 && f != datum.n())
            .collect();
        interior.len() <= 1
    })
}

/// Are all symmetric weights supported within `sigma` good? Decided by the
/// generating criterion: no tau in sigma admits a non-scalar symmetric
/// component where goodness demands a scalar one.
pub fn all_symmetric_supported_good<'a, I: IntoIterator<Item = &'a str>>(
    datum: &ShimuraDatum,
    sigma: I,
) -> Result<bool, WeightError> {
    if datum.case() == Case::C {
        return Ok(true);
    }
    let set: BTreeSet<&str> = sigma.into_iter().collect();
    for &tau in &set {
        let star = datum.star(tau)?;
        if !set.contains(star) {
            // Symmetric weights supported within sigma vanish at tau.
            continue;
        }
        let f = datum.f(tau)?;
        let fs = datum.f(star)?;
        let oi = datum.orbit_index_of(tau)?;
        let bad = f >= 2 && fs >= 1 && Some(f) != datum.min_positive_f(oi);
        if bad {
            return Ok(false);
        }
    }
    Ok(true)
}
