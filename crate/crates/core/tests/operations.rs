//! Cross-module checks for the remaining operation examples: the operators
//! over the mu-ordinary locus, the twisted basic operator, etale and
//! full-signature orbits, case-C admissibility, and the determinant power
//! against the Young-symmetrizer oracle.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;

use mutheta::crystal;
use mutheta::datum::{validate_datum, DatumDoc, ShimuraDatum};
use mutheta::polygon;
use mutheta::sample::{fix_c, fix_inert21, fix_split};
use mutheta::schur;
use mutheta::theta::{self, OperatorDescriptor, OperatorKind};
use mutheta::weights::{self, Weight};

fn w(datum: &ShimuraDatum, text: &str) -> Weight {
    Weight::parse(datum, text).unwrap()
}

fn all_embeddings(datum: &ShimuraDatum) -> BTreeSet<String> {
    datum.embedding_ids().map(str::to_string).collect()
}

/// Split pair of orbits of size two with signatures 0 and n: one etale
/// orbit, one of full signature.
fn split_extreme(n: u32) -> ShimuraDatum {
    validate_datum(&DatumDoc {
        case: "A".into(),
        n,
        p: 3,
        orbits: vec![
            vec!["a0".into(), "a1".into()],
            vec!["b0".into(), "b1".into()],
        ],
        star: BTreeMap::from([
            ("a0".into(), "b0".into()),
            ("b0".into(), "a0".into()),
            ("a1".into(), "b1".into()),
            ("b1".into(), "a1".into()),
        ]),
        cm_type: vec!["a0".into(), "a1".into()],
        signature: BTreeMap::from([
            ("a0".into(), 0),
            ("a1".into(), 0),
            ("b0".into(), n),
            ("b1".into(), n),
        ]),
    })
    .unwrap()
}

#[test]
fn etale_and_full_orbits() {
    let d = split_extreme(3);
    let etale = crystal::standard_crystal(&d, d.orbit_index_of("a0").unwrap()).unwrap();
    assert!(etale.epsilon().iter().all(|row| row.iter().all(|&x| x == 0)));
    assert_eq!(crystal::phi_valuations(&etale, "a0").unwrap(), vec![0, 0, 0]);
    assert_eq!(
        crystal::slope_graded_ranks(&etale, "a0").unwrap(),
        Vec::<u32>::new()
    );
    assert_eq!(polygon::filtration_ranks(&d, "a0").unwrap(), Vec::<u32>::new());

    // Full signature on an orbit of size e: all valuations equal e.
    let full = crystal::standard_crystal(&d, d.orbit_index_of("b0").unwrap()).unwrap();
    assert_eq!(crystal::phi_valuations(&full, "b0").unwrap(), vec![2, 2, 2]);
    assert_eq!(polygon::slope_counts(&d, "b0").unwrap(), vec![2, 2, 2]);
    // One slope class of full multiplicity.
    assert_eq!(polygon::filtration_ranks(&d, "b0").unwrap(), vec![3]);
    // Upsilon excludes both orbits.
    assert!(d.upsilon().is_empty());
}

#[test]
fn theta_omol_raises_by_lambda_only() {
    let d = fix_inert21();
    let kappa = w(&d, "taustar:3");
    let lambda = w(&d, "tau:1,0;taustar:1");
    let op = OperatorDescriptor::new(OperatorKind::ThetaOmol {
        lambda: lambda.clone(),
    });
    let result = theta::apply(&d, &op, &kappa).unwrap();
    assert_eq!(result.target, kappa.add(&d, &lambda).unwrap());
    assert!(result.ledger.hasse_piece.is_zero());

    // Non-simple kappa is rejected.
    let bad = w(&d, "tau:2,2");
    let check = theta::applicable(&d, &op, &bad).unwrap();
    assert!(!check.ok);
    assert_eq!(check.reason.as_deref(), Some("kappa not simple"));

    // A weight living on an orbit whose signature meets zero is not simple,
    // so it never reaches the extension step.
    let s = mutheta::sample::fix_def();
    let op = OperatorDescriptor::new(OperatorKind::ThetaOmol {
        lambda: Weight::zero(),
    });
    let kappa = w(&s, "tau:1,1");
    let check = theta::applicable(&s, &op, &kappa).unwrap();
    assert!(!check.ok);
    assert_eq!(check.reason.as_deref(), Some("kappa not simple"));
}

#[test]
fn theta_tilde_basic_pinned_target() {
    let d = fix_inert21();
    let kappa = w(&d, "tau:2,2;taustar:5");
    let op = OperatorDescriptor::new(OperatorKind::ThetaTildeBasic {
        sigma: all_embeddings(&d),
        tau_bar: "tau".into(),
    });
    let result = theta::apply(&d, &op, &kappa).unwrap();
    assert_eq!(result.target, w(&d, "tau:10,10;taustar:17"));
    assert_eq!(result.ledger.twist_piece, w(&d, "taustar:4"));
    // Target is again good and supported: the operator iterates.
    let again = theta::apply(&d, &op, &result.target).unwrap();
    assert_eq!(again.target, w(&d, "tau:18,18;taustar:29"));
}

#[test]
fn case_c_operators() {
    let d = fix_c();
    let kappa = w(&d, "tau:1,1");
    let op = OperatorDescriptor::new(OperatorKind::ThetaBasic {
        sigma: all_embeddings(&d),
        tau_bar: "tau".into(),
    });
    // kappa + (p - 1) scalar + the Sym^2 weight at tau.
    let result = theta::apply(&d, &op, &kappa).unwrap();
    assert_eq!(result.target, w(&d, "tau:5,3"));

    // All weights are good in case C; Maass-Shimura accepts any admissible
    // weight (symmetry is vacuous).
    assert!(weights::all_weights_good(&d));
    let (exists, witness) = weights::good_symmetric_exists(&d).unwrap();
    assert!(exists && witness.is_some());
    let maass = OperatorDescriptor::new(OperatorKind::MaassShimura {
        lambda: w(&d, "tau:2,0"),
    });
    assert!(theta::applicable(&d, &maass, &kappa).unwrap().ok);
    let odd = OperatorDescriptor::new(OperatorKind::MaassShimura {
        lambda: w(&d, "tau:1,0"),
    });
    assert!(!theta::applicable(&d, &odd, &kappa).unwrap().ok);
}

#[test]
fn admissible_depth_examples() {
    let d = fix_inert21();
    // delta(tau_bar) has depth one.
    let delta = weights::delta(&d, "tau").unwrap();
    assert_eq!(schur::admissible_depth(&d, &delta), Some(1));
    assert_eq!(
        schur::admissible_depth(&d, &w(&d, "tau:1,0;taustar:1")),
        Some(1)
    );
    // Non-sum-symmetric: none.
    assert_eq!(schur::admissible_depth(&d, &w(&d, "tau:2,2;taustar:5")), None);
    assert_eq!(schur::admissible_depth(&d, &Weight::zero()), Some(0));

    let s = fix_split();
    assert_eq!(
        schur::admissible_depth(&s, &weights::delta(&s, "tau1").unwrap()),
        Some(1)
    );

    // Case C: even size and dominance over the two-column rectangle.
    let c = fix_c();
    assert_eq!(schur::admissible_depth(&c, &w(&c, "tau:2,0")), Some(1));
    assert_eq!(schur::admissible_depth(&c, &w(&c, "tau:1,1")), None);
    assert_eq!(schur::admissible_depth(&c, &w(&c, "tau:1,0")), None);
    assert_eq!(schur::admissible_depth(&c, &w(&c, "tau:3,1")), Some(2));
    assert_eq!(schur::admissible_depth(&c, &w(&c, "tau:2,2")), Some(2));
}

#[test]
fn det_power_matches_weight_stats() {
    // r(kappa) from the weight stats equals |kappa| rank / a with the rank
    // taken from the Young-symmetrizer oracle, across the bounded grid.
    let d = fix_inert21();
    for tuple in [vec![2, 1], vec![3, 0], vec![2, 2], vec![1, 0]] {
        let kappa = Weight::new(&d, BTreeMap::from([("tau".to_string(), tuple.clone())])).unwrap();
        let stats = weights::weight_stats(&d, &kappa).unwrap();
        let rank = schur::brute_force_dim(2, &tuple).unwrap();
        let size: i64 = tuple.iter().sum();
        assert_eq!(
            stats.det_power["tau"],
            BigInt::from(size) * rank / BigInt::from(2),
            "tuple {tuple:?}"
        );
    }
}

#[test]
fn amalgamated_datum_polygon() {
    let d = fix_split();
    let total = polygon::datum_polygon(&d).unwrap();
    assert_eq!(total.slopes().len(), 4);
    assert!(total.slopes().windows(2).all(|p| p[0] <= p[1]));
    let e = split_extreme(2);
    let total = polygon::datum_polygon(&e).unwrap();
    // Etale orbit contributes zeros, full orbit contributes ones.
    let ones = total
        .slopes()
        .iter()
        .filter(|s| **s == num::rational::Ratio::from_integer(1))
        .count();
    assert_eq!(ones, 2);
    assert!(polygon::is_ordinary(&e).unwrap());
}
