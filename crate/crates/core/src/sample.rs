//! Canned fixtures and seeded random data, shared by the test suites and the
//! acceptance harness.

use std::collections::BTreeMap;

use rand::Rng;

use crate::datum::{validate_datum, DatumDoc, ShimuraDatum};

fn build(doc: DatumDoc) -> ShimuraDatum {
    validate_datum(&doc).expect("fixture datum is valid")
}

/// Case A, n = 2, p = 5, two singleton orbits {tau1}, {tau1star}, f = 1.
pub fn fix_split() -> ShimuraDatum {
    build(DatumDoc {
        case: "A".into(),
        n: 2,
        p: 5,
        orbits: vec![vec!["tau1".into()], vec!["tau1star".into()]],
        star: BTreeMap::from([
            ("tau1".into(), "tau1star".into()),
            ("tau1star".into(), "tau1".into()),
        ]),
        cm_type: vec!["tau1".into()],
        signature: BTreeMap::from([("tau1".into(), 1), ("tau1star".into(), 1)]),
    })
}

/// Case A, n = 3, p = 3, one orbit {tau, taustar} swapped by sigma,
/// f(tau) = 2, f(taustar) = 1.
pub fn fix_inert21() -> ShimuraDatum {
    build(DatumDoc {
        case: "A".into(),
        n: 3,
        p: 3,
        orbits: vec![vec!["tau".into(), "taustar".into()]],
        star: BTreeMap::from([
            ("tau".into(), "taustar".into()),
            ("taustar".into(), "tau".into()),
        ]),
        cm_type: vec!["tau".into()],
        signature: BTreeMap::from([("tau".into(), 2), ("taustar".into(), 1)]),
    })
}

/// Case A, n = 2, p = 3, one orbit {tau, taustar}, f = 1.
pub fn fix_inert11() -> ShimuraDatum {
    build(DatumDoc {
        case: "A".into(),
        n: 2,
        p: 3,
        orbits: vec![vec!["tau".into(), "taustar".into()]],
        star: BTreeMap::from([
            ("tau".into(), "taustar".into()),
            ("taustar".into(), "tau".into()),
        ]),
        cm_type: vec!["tau".into()],
        signature: BTreeMap::from([("tau".into(), 1), ("taustar".into(), 1)]),
    })
}

/// Case A, n = 2, p = 3, one orbit of size 2 with f(tau) = 2, f(taustar) = 0
/// (definite at one member).
pub fn fix_def() -> ShimuraDatum {
    build(DatumDoc {
        case: "A".into(),
        n: 2,
        p: 3,
        orbits: vec![vec!["tau".into(), "taustar".into()]],
        star: BTreeMap::from([
            ("tau".into(), "taustar".into()),
            ("taustar".into(), "tau".into()),
        ]),
        cm_type: vec!["tau".into()],
        signature: BTreeMap::from([("tau".into(), 2), ("taustar".into(), 0)]),
    })
}

/// Case C, n = 2, p = 3, one singleton orbit {tau}.
pub fn fix_c() -> ShimuraDatum {
    build(DatumDoc {
        case: "C".into(),
        n: 2,
        p: 3,
        orbits: vec![vec!["tau".into()]],
        star: BTreeMap::new(),
        cm_type: vec![],
        signature: BTreeMap::from([("tau".into(), 2)]),
    })
}

/// All five shipped fixtures.
pub fn fixtures() -> Vec<(&'static str, ShimuraDatum)> {
    vec![
        ("FIX-SPLIT", fix_split()),
        ("FIX-INERT21", fix_inert21()),
        ("FIX-INERT11", fix_inert11()),
        ("FIX-DEF", fix_def()),
        ("FIX-C", fix_c()),
    ]
}

const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

/// Random case-A datum with n <= max_n and orbit sizes <= max_e; signatures
/// satisfy f(tau) + f(tau*) = n.
///
/// Places come in two shapes: a split pair of star-swapped orbits, or a
/// single star-stable orbit of even size with star = sigma^(e/2).
pub fn random_case_a<R: Rng>(rng: &mut R, max_n: u32, max_e: usize) -> ShimuraDatum {
    let n = rng.gen_range(1..=max_n);
    let p = SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())];
    let places = rng.gen_range(1..=3usize);
    let mut orbits: Vec<Vec<String>> = Vec::new();
    let mut star = BTreeMap::new();
    let mut cm_type = Vec::new();
    let mut signature = BTreeMap::new();
    for w in 0..places {
        let inert = max_e >= 2 && rng.gen_bool(0.5);
        if inert {
            // One star-stable orbit [t0, ..., t_{e-1}], star = shift by e/2.
            let e = 2 * rng.gen_range(1..=(max_e / 2).max(1));
            let ids: Vec<String> = (0..e).map(|i| format!("w{w}t{i}")).collect();
            for i in 0..e {
                let j = (i + e / 2) % e;
                star.insert(ids[i].clone(), ids[j].clone());
                if i < e / 2 {
                    cm_type.push(ids[i].clone());
                    let f = rng.gen_range(0..=n);
                    signature.insert(ids[i].clone(), f);
                    signature.insert(ids[j].clone(), n - f);
                }
            }
            orbits.push(ids);
        } else {
            let e = rng.gen_range(1..=max_e);
            let a: Vec<String> = (0..e).map(|i| format!("w{w}a{i}")).collect();
            let b: Vec<String> = (0..e).map(|i| format!("w{w}b{i}")).collect();
            for i in 0..e {
                star.insert(a[i].clone(), b[i].clone());
                star.insert(b[i].clone(), a[i].clone());
                cm_type.push(a[i].clone());
                let f = rng.gen_range(0..=n);
                signature.insert(a[i].clone(), f);
                signature.insert(b[i].clone(), n - f);
            }
            orbits.push(a);
            orbits.push(b);
        }
    }
    build(DatumDoc {
        case: "A".into(),
        n,
        p,
        orbits,
        star,
        cm_type,
        signature,
    })
}

/// Random case-A datum in which every orbit is a singleton (p totally split).
pub fn random_split<R: Rng>(rng: &mut R, max_n: u32) -> ShimuraDatum {
    let n = rng.gen_range(1..=max_n);
    let p = SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())];
    let places = rng.gen_range(1..=3usize);
    let mut orbits = Vec::new();
    let mut star = BTreeMap::new();
    let mut cm_type = Vec::new();
    let mut signature = BTreeMap::new();
    for w in 0..places {
        let a = format!("w{w}a");
        let b = format!("w{w}b");
        star.insert(a.clone(), b.clone());
        star.insert(b.clone(), a.clone());
        cm_type.push(a.clone());
        let f = rng.gen_range(0..=n);
        signature.insert(a.clone(), f);
        signature.insert(b.clone(), n - f);
        orbits.push(vec![a]);
        orbits.push(vec![b]);
    }
    build(DatumDoc {
        case: "A".into(),
        n,
        p,
        orbits,
        star,
        cm_type,
        signature,
    })
}

/// Random datum shaped like FIX-INERT21: a single star-stable orbit of size
/// two with 0 < f(tau) < n, so Upsilon is nonempty.
pub fn random_inert_pair<R: Rng>(rng: &mut R, max_n: u32) -> ShimuraDatum {
    let n = rng.gen_range(2..=max_n.max(2));
    let p = SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())];
    let f = rng.gen_range(1..n);
    build(DatumDoc {
        case: "A".into(),
        n,
        p,
        orbits: vec![vec!["tau".into(), "taustar".into()]],
        star: BTreeMap::from([
            ("tau".into(), "taustar".into()),
            ("taustar".into(), "tau".into()),
        ]),
        cm_type: vec!["tau".into()],
        signature: BTreeMap::from([("tau".into(), f), ("taustar".into(), n - f)]),
    })
}

/// Random dominant tuple of the given length with entries in [lo, hi].
pub fn random_dominant<R: Rng>(rng: &mut R, len: usize, lo: i64, hi: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (0..len).map(|_| rng.gen_range(lo..=hi)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}
