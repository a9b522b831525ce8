//! The combinatorial shadow of a PEL Shimura datum at an unramified prime:
//! embeddings grouped into cyclic sigma-orbits, the star involution, a CM
//! type, and the signature map.
//!
//! Orbit cyclic order is input data. After validation the datum is immutable
//! and all queries are pure.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    A,
    C,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Case::A => write!(f, "A"),
            Case::C => write!(f, "C"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DatumError {
    #[error("duplicate embedding `{0}`")]
    DuplicateEmbedding(String),
    #[error("signature mismatch at `{tau}`: f({tau}) + f({tau_star}) = {sum}, expected n = {n}")]
    SignatureMismatch {
        tau: String,
        tau_star: String,
        sum: i64,
        n: u32,
    },
    #[error("star/orbit mismatch: {0}")]
    StarOrbitMismatch(String),
    #[error("bad CM type: {0}")]
    BadCmType(String),
    #[error("unknown embedding `{0}`")]
    UnknownEmbedding(String),
    #[error("embeddings `{0}` and `{1}` lie in different orbits")]
    DifferentOrbits(String, String),
    #[error("invalid datum: {0}")]
    Invalid(String),
}

/// One embedding, addressed by its opaque label and located inside its orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub id: String,
    pub orbit_index: usize,
    pub position: usize,
}

/// A sigma-orbit: cyclically ordered embedding labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub members: Vec<String>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Raw datum document, as read from a TOML or JSON file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumDoc {
    pub case: String,
    pub n: u32,
    pub p: u64,
    pub orbits: Vec<Vec<String>>,
    #[serde(default)]
    pub star: BTreeMap<String, String>,
    #[serde(default)]
    pub cm_type: Vec<String>,
    pub signature: BTreeMap<String, u32>,
}

/// Validated Shimura datum. Immutable; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShimuraDatum {
    case: Case,
    n: u32,
    p: u64,
    orbits: Vec<Orbit>,
    star: BTreeMap<String, String>,
    cm_type: BTreeSet<String>,
    signature: BTreeMap<String, u32>,
    index: BTreeMap<String, (usize, usize)>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Validate a raw datum document and bring it into canonical form: each orbit
/// is rotated so its lexicographically least member comes first, and orbits
/// are sorted by first member.
pub fn validate_datum(doc: &DatumDoc) -> Result<ShimuraDatum, DatumError> {
    let case = match doc.case.as_str() {
        "A" | "a" => Case::A,
        "C" | "c" => Case::C,
        other => return Err(DatumError::Invalid(format!("unknown case `{other}`"))),
    };
    if doc.n == 0 {
        return Err(DatumError::Invalid("n must be positive".into()));
    }
    if !is_prime(doc.p) {
        return Err(DatumError::Invalid(format!("p = {} is not prime", doc.p)));
    }

    // Membership and uniqueness.
    let mut index = BTreeMap::new();
    let mut orbits: Vec<Orbit> = Vec::new();
    for members in &doc.orbits {
        if members.is_empty() {
            return Err(DatumError::Invalid("empty orbit".into()));
        }
        // Rotate so the least label is first; cyclic order is preserved.
        let least = members
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        let rotated: Vec<String> = (0..members.len())
            .map(|k| members[(least + k) % members.len()].clone())
            .collect();
        orbits.push(Orbit { members: rotated });
    }
    orbits.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    for (oi, orbit) in orbits.iter().enumerate() {
        for (pos, id) in orbit.members.iter().enumerate() {
            if index.insert(id.clone(), (oi, pos)).is_some() {
                return Err(DatumError::DuplicateEmbedding(id.clone()));
            }
        }
    }

    let known = |id: &String| -> Result<(), DatumError> {
        if index.contains_key(id) {
            Ok(())
        } else {
            Err(DatumError::UnknownEmbedding(id.clone()))
        }
    };

    // Signature: total, in range.
    for (id, f) in &doc.signature {
        known(id)?;
        if *f > doc.n {
            return Err(DatumError::Invalid(format!(
                "signature f({id}) = {f} exceeds n = {}",
                doc.n
            )));
        }
    }
    for id in index.keys() {
        if !doc.signature.contains_key(id) {
            return Err(DatumError::Invalid(format!("missing signature for `{id}`")));
        }
    }

    // Star and CM type, case by case.
    let (star, cm_type) = match case {
        Case::C => {
            let star: BTreeMap<String, String> = if doc.star.is_empty() {
                index.keys().map(|id| (id.clone(), id.clone())).collect()
            } else {
                for (a, b) in &doc.star {
                    known(a)?;
                    known(b)?;
                    if a != b {
                        return Err(DatumError::StarOrbitMismatch(format!(
                            "case C requires star = identity, got {a} -> {b}"
                        )));
                    }
                }
                if doc.star.len() != index.len() {
                    return Err(DatumError::StarOrbitMismatch(
                        "case C star must cover all embeddings or be omitted".into(),
                    ));
                }
                doc.star.clone()
            };
            let cm: BTreeSet<String> = if doc.cm_type.is_empty() {
                index.keys().cloned().collect()
            } else {
                let cm: BTreeSet<String> = doc.cm_type.iter().cloned().collect();
                if cm.len() != index.len() || !cm.iter().all(|id| index.contains_key(id)) {
                    return Err(DatumError::BadCmType(
                        "case C CM type must be all embeddings or omitted".into(),
                    ));
                }
                cm
            };
            for (id, f) in &doc.signature {
                if *f != doc.n {
                    return Err(DatumError::Invalid(format!(
                        "case C requires f({id}) = n, got {f}"
                    )));
                }
            }
            (star, cm)
        }
        Case::A => {
            for (a, b) in &doc.star {
                known(a)?;
                known(b)?;
            }
            if doc.star.len() != index.len() {
                return Err(DatumError::StarOrbitMismatch(
                    "star must be defined on every embedding".into(),
                ));
            }
            for (a, b) in &doc.star {
                if a == b {
                    return Err(DatumError::StarOrbitMismatch(format!(
                        "star fixes `{a}` in case A"
                    )));
                }
                match doc.star.get(b) {
                    Some(back) if back == a => {}
                    _ => {
                        return Err(DatumError::StarOrbitMismatch(format!(
                            "star is not an involution at `{a}`"
                        )))
                    }
                }
            }
            // Star commutes with the sigma-shift (hence maps orbits to orbits).
            for (id, &(oi, pos)) in &index {
                let shifted = &orbits[oi].members[(pos + 1) % orbits[oi].size()];
                let a = doc.star.get(shifted).unwrap();
                let s = doc.star.get(id).unwrap();
                let &(soi, spos) = index
                    .get(s)
                    .ok_or_else(|| DatumError::UnknownEmbedding(s.clone()))?;
                let b = &orbits[soi].members[(spos + 1) % orbits[soi].size()];
                if a != b {
                    return Err(DatumError::StarOrbitMismatch(format!(
                        "star does not commute with the orbit shift at `{id}`"
                    )));
                }
            }
            // Signature pairing.
            for (id, &f) in &doc.signature {
                let s = doc.star.get(id).unwrap();
                let fs = doc.signature[s];
                if f + fs != doc.n {
                    return Err(DatumError::SignatureMismatch {
                        tau: id.clone(),
                        tau_star: s.clone(),
                        sum: i64::from(f) + i64::from(fs),
                        n: doc.n,
                    });
                }
            }
            // CM type: exactly one of {tau, tau*} per pair.
            let cm: BTreeSet<String> = doc.cm_type.iter().cloned().collect();
            for id in &doc.cm_type {
                known(id)?;
            }
            if cm.len() != doc.cm_type.len() {
                return Err(DatumError::BadCmType("duplicate CM type entry".into()));
            }
            for id in index.keys() {
                let s = doc.star.get(id).unwrap();
                match (cm.contains(id), cm.contains(s)) {
                    (true, false) | (false, true) => {}
                    _ => {
                        return Err(DatumError::BadCmType(format!(
                            "CM type must contain exactly one of {{{id}, {s}}}"
                        )))
                    }
                }
            }
            (doc.star.clone(), cm)
        }
    };

    Ok(ShimuraDatum {
        case,
        n: doc.n,
        p: doc.p,
        orbits,
        star,
        cm_type,
        signature: doc.signature.clone(),
        index,
    })
}

impl ShimuraDatum {
    pub fn parse_toml(text: &str) -> Result<Self, DatumError> {
        let doc: DatumDoc =
            toml::from_str(text).map_err(|e| DatumError::Invalid(format!("TOML: {e}")))?;
        validate_datum(&doc)
    }

    pub fn parse_json(text: &str) -> Result<Self, DatumError> {
        let doc: DatumDoc =
            serde_json::from_str(text).map_err(|e| DatumError::Invalid(format!("JSON: {e}")))?;
        validate_datum(&doc)
    }

    /// Parse a datum file; tries TOML first, then JSON.
    pub fn parse_str(text: &str) -> Result<Self, DatumError> {
        Self::parse_toml(text).or_else(|toml_err| Self::parse_json(text).map_err(|_| toml_err))
    }

    pub fn case(&self) -> Case {
        self.case
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    /// All embedding ids in canonical order (orbit by orbit, cyclic position).
    pub fn embedding_ids(&self) -> impl Iterator<Item = &str> {
        self.orbits
            .iter()
            .flat_map(|o| o.members.iter().map(String::as_str))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn embedding(&self, id: &str) -> Result<Embedding, DatumError> {
        let &(oi, pos) = self
            .index
            .get(id)
            .ok_or_else(|| DatumError::UnknownEmbedding(id.to_string()))?;
        Ok(Embedding {
            id: id.to_string(),
            orbit_index: oi,
            position: pos,
        })
    }

    pub fn orbit_index_of(&self, id: &str) -> Result<usize, DatumError> {
        Ok(self.embedding(id)?.orbit_index)
    }

    pub fn orbit_of(&self, id: &str) -> Result<&Orbit, DatumError> {
        Ok(&self.orbits[self.orbit_index_of(id)?])
    }

    pub fn orbit_size(&self, id: &str) -> Result<usize, DatumError> {
        Ok(self.orbit_of(id)?.size())
    }

    /// Signature value f(tau).
    pub fn f(&self, id: &str) -> Result<u32, DatumError> {
        self.signature
            .get(id)
            .copied()
            .ok_or_else(|| DatumError::UnknownEmbedding(id.to_string()))
    }

    pub fn star(&self, id: &str) -> Result<&str, DatumError> {
        self.star
            .get(id)
            .map(String::as_str)
            .ok_or_else(|| DatumError::UnknownEmbedding(id.to_string()))
    }

    pub fn cm_type(&self) -> &BTreeSet<String> {
        &self.cm_type
    }

    pub fn in_cm_type(&self, id: &str) -> bool {
        self.cm_type.contains(id)
    }

    /// tau composed with the j-th power of Frobenius (j reduced mod the orbit
    /// size; negative j allowed).
    pub fn sigma_shift(&self, id: &str, j: i64) -> Result<&str, DatumError> {
        let emb = self.embedding(id)?;
        let e = self.orbits[emb.orbit_index].size() as i64;
        let pos = (emb.position as i64 + j).rem_euclid(e) as usize;
        Ok(&self.orbits[emb.orbit_index].members[pos])
    }

    /// The unique 0 <= j < e with base . sigma^j = tau.
    pub fn j_index(&self, tau: &str, base: &str) -> Result<usize, DatumError> {
        let a = self.embedding(tau)?;
        let b = self.embedding(base)?;
        if a.orbit_index != b.orbit_index {
            return Err(DatumError::DifferentOrbits(
                tau.to_string(),
                base.to_string(),
            ));
        }
        let e = self.orbits[a.orbit_index].size();
        Ok((a.position + e - b.position) % e)
    }

    /// Signature values over an orbit, in cyclic order.
    pub fn orbit_signature(&self, orbit_index: usize) -> Vec<u32> {
        self.orbits[orbit_index]
            .members
            .iter()
            .map(|m| self.signature[m])
            .collect()
    }

    /// min of the positive signature values on the orbit of `id`, if any.
    pub fn min_positive_f(&self, orbit_index: usize) -> Option<u32> {
        self.orbit_signature(orbit_index)
            .into_iter()
            .filter(|&f| f > 0)
            .min()
    }

    /// Does the orbit avoid both 0 and n in its signature values?
    pub fn orbit_avoids_extremes(&self, orbit_index: usize) -> bool {
        self.orbit_signature(orbit_index)
            .iter()
            .all(|&f| f != 0 && f != self.n)
    }

    /// The fixed base point tau_o of a qualifying orbit: least cyclic
    /// position attaining the minimal signature value.
    pub fn base_point(&self, orbit_index: usize) -> Option<&str> {
        if !self.orbit_avoids_extremes(orbit_index) {
            return None;
        }
        let sig = self.orbit_signature(orbit_index);
        let min = *sig.iter().min().unwrap();
        let pos = sig.iter().position(|&f| f == min).unwrap();
        Some(&self.orbits[orbit_index].members[pos])
    }

    /// Upsilon: one base point per orbit whose signature avoids 0 and n.
    pub fn upsilon(&self) -> Vec<&str> {
        (0..self.orbits.len())
            .filter_map(|oi| self.base_point(oi))
            .collect()
    }

    /// Canonical serializable document. `validate_datum` of the result
    /// reproduces this datum exactly.
    pub fn to_doc(&self) -> DatumDoc {
        DatumDoc {
            case: self.case.to_string(),
            n: self.n,
            p: self.p,
            orbits: self.orbits.iter().map(|o| o.members.clone()).collect(),
            star: self.star.clone(),
            cm_type: self.cm_type.iter().cloned().collect(),
            signature: self.signature.clone(),
        }
    }

    /// Canonical JSON form; byte-for-byte deterministic.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("datum doc serializes")
    }
}
