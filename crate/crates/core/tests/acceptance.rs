//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Every tolerance is exact; the randomized corpora are seeded and
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num::rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mutheta::crystal;
use mutheta::datum::ShimuraDatum;
use mutheta::galois;
use mutheta::polygon;
use mutheta::sample::{
    fix_def, fix_inert11, fix_inert21, fix_split, random_case_a, random_dominant,
    random_inert_pair, random_split,
};
use mutheta::schur;
use mutheta::theta::{self, OperatorDescriptor, OperatorKind, ThetaVariant};
use mutheta::weights::{self, Weight};

struct Criterion {
    name: &'static str,
    start: Instant,
}

impl Criterion {
    fn begin(name: &'static str) -> Self {
        Criterion {
            name,
            start: Instant::now(),
        }
    }
    fn pass(self) {
        println!(
            "[{}] PASS ({} ms)",
            self.name,
            self.start.elapsed().as_millis()
        );
    }
    fn elapsed_secs(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

fn w(datum: &ShimuraDatum, text: &str) -> Weight {
    Weight::parse(datum, text).unwrap()
}

fn all_embeddings(datum: &ShimuraDatum) -> BTreeSet<String> {
    datum.embedding_ids().map(str::to_string).collect()
}

fn corpus(seed: u64, count: usize) -> Vec<ShimuraDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_case_a(&mut rng, 6, 4)).collect()
}

#[test]
fn ac01_slope_sum_identity() {
    let c = Criterion::begin("AC1 slope-sum identity");
    for d in corpus(1001, 500) {
        for (oi, orbit) in d.orbits().iter().enumerate() {
            let poly = polygon::orbit_polygon(&d, oi).unwrap();
            let e = orbit.size() as i64;
            let lhs: Ratio<i64> =
                poly.slopes().iter().sum::<Ratio<i64>>() * Ratio::from_integer(e);
            let rhs: i64 = orbit
                .members
                .iter()
                .map(|m| i64::from(d.f(m).unwrap()))
                .sum();
            assert_eq!(lhs, Ratio::from_integer(rhs), "orbit {oi} of {:?}", d.to_doc());
        }
    }
    assert!(c.elapsed_secs() < 5.0, "runtime bound 5 s");
    c.pass();
}

#[test]
fn ac02_ordinariness() {
    let c = Criterion::begin("AC2 ordinariness");
    for d in corpus(1002, 500) {
        let by_polygon = polygon::is_ordinary(&d).unwrap();
        let by_signature = (0..d.orbits().len()).all(|oi| {
            let sig = d.orbit_signature(oi);
            sig.iter().all(|&f| f == sig[0])
        });
        assert_eq!(by_polygon, by_signature);
    }
    assert!(polygon::is_ordinary(&fix_split()).unwrap());
    assert!(!polygon::is_ordinary(&fix_inert21()).unwrap());
    assert!(polygon::is_ordinary(&fix_inert11()).unwrap());
    c.pass();
}

#[test]
fn ac03_hasse_exponent_ground_truth() {
    let c = Criterion::begin("AC3 Hasse-exponent ground truth");
    for d in corpus(1003, 500) {
        for id in d.embedding_ids() {
            if d.f(id).unwrap() == 0 {
                continue;
            }
            let by_valuations = crystal::c_exponent(&d, id).unwrap();
            let by_slope_sum = crystal::c_exponent_slope_sum(&d, id).unwrap();
            assert_eq!(by_valuations, by_slope_sum, "at {id} of {:?}", d.to_doc());
            let oi = d.orbit_index_of(id).unwrap();
            if Some(d.f(id).unwrap()) == d.min_positive_f(oi) {
                let a = crystal::a_exponent(&d, id).unwrap();
                assert_eq!(
                    by_valuations,
                    u64::from(d.f(id).unwrap()) * a,
                    "c = f a at {id}"
                );
            }
        }
    }
    let d = fix_inert21();
    assert_eq!(crystal::c_exponent(&d, "tau").unwrap(), 1);
    assert_eq!(crystal::c_exponent(&d, "taustar").unwrap(), 0);
    assert_eq!(crystal::c_exponent(&fix_def(), "tau").unwrap(), 2);
    assert!(c.elapsed_secs() < 5.0, "runtime bound 5 s");
    c.pass();
}

#[test]
fn ac04_filtration_ranks() {
    let c = Criterion::begin("AC4 filtration ranks");
    for d in corpus(1004, 500) {
        for (oi, orbit) in d.orbits().iter().enumerate() {
            let cr = crystal::standard_crystal(&d, oi).unwrap();
            for tau in &orbit.members {
                let from_polygon = polygon::filtration_ranks(&d, tau).unwrap();
                let from_crystal = crystal::slope_graded_ranks(&cr, tau).unwrap();
                assert_eq!(from_polygon, from_crystal, "at {tau} of {:?}", d.to_doc());
                let total: u32 = from_polygon.iter().sum();
                assert_eq!(total, d.f(tau).unwrap());
            }
        }
    }
    c.pass();
}

#[test]
fn ac05_schur_engine() {
    let c = Criterion::begin("AC5 Schur engine");
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    // Exhaustive dimension grid with determinant-power trials.
    for a in 1..=3usize {
        for size in 0..=4u64 {
            for lambda in schur::partitions_of(size, a) {
                let tuple = lambda.to_tuple(a);
                let closed = schur::weyl_dim(a, &tuple).unwrap();
                let brute = schur::brute_force_dim(a, &tuple).unwrap();
                assert_eq!(closed, brute, "a = {a}, lambda = {lambda}");
                assert!(
                    schur::det_power_check(a, &tuple, 20, &mut rng).unwrap(),
                    "det power at a = {a}, lambda = {lambda}"
                );
            }
        }
    }
    // Multiplicity one and dimension conservation (asserted internally).
    for e in 0..=4u64 {
        for a in 1..=3usize {
            for b in 1..=3usize {
                let exp = schur::cauchy_sym_power(e, a, b);
                assert!(exp.multiplicity_free());
            }
            let exp = schur::plethysm_sym_sym2(e, a);
            assert!(exp.multiplicity_free());
        }
    }
    assert!(c.elapsed_secs() < 60.0, "runtime bound 60 s");
    c.pass();
}

#[test]
fn ac06_operator_weight_maps() {
    let c = Criterion::begin("AC6 operator weight maps");
    let d = fix_inert21();
    let kappa = w(&d, "tau:2,2;taustar:5");
    let basic = OperatorDescriptor::new(OperatorKind::ThetaBasic {
        sigma: all_embeddings(&d),
        tau_bar: "tau".into(),
    });
    assert_eq!(
        theta::apply(&d, &basic, &kappa).unwrap().target,
        w(&d, "tau:11,10;taustar:13")
    );
    let tilde = OperatorDescriptor::new(OperatorKind::ThetaTilde {
        sigma: all_embeddings(&d),
        lambda: weights::delta(&d, "tau").unwrap(),
    });
    assert_eq!(
        theta::apply(&d, &tilde, &kappa).unwrap().target,
        w(&d, "tau:10,10;taustar:17")
    );

    let d11 = fix_inert11();
    let kappa = w(&d11, "tau:1;taustar:1");
    let lambda = w(&d11, "tau:2;taustar:2");
    let allgood = OperatorDescriptor::new(OperatorKind::Theta {
        sigma: all_embeddings(&d11),
        lambda: lambda.clone(),
        variant: ThetaVariant::AllGood,
    });
    let general = OperatorDescriptor::new(OperatorKind::Theta {
        sigma: all_embeddings(&d11),
        lambda,
        variant: ThetaVariant::General,
    });
    assert_eq!(
        theta::apply(&d11, &allgood, &kappa).unwrap().target,
        w(&d11, "tau:19;taustar:19")
    );
    assert_eq!(
        theta::apply(&d11, &general, &kappa).unwrap().target,
        w(&d11, "tau:35;taustar:35")
    );
    c.pass();
}

#[test]
fn ac07_split_prime_degeneration() {
    let c = Criterion::begin("AC7 split-prime degeneration");
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let mut tested = 0;
    while tested < 200 {
        let d = random_split(&mut rng, 5);
        assert!(weights::all_weights_good(&d));
        // Random symmetric lambda and good kappa, both supported at Sigma.
        let mut lam_comps = BTreeMap::new();
        for tau in d.cm_type() {
            if !rng.gen_bool(0.7) {
                continue;
            }
            let star = d.star(tau).unwrap().to_string();
            let m = d.f(tau).unwrap().min(d.f(&star).unwrap()) as usize;
            if m == 0 {
                continue;
            }
            let head = random_dominant(&mut rng, m, 0, 3);
            for id in [tau.clone(), star] {
                let f = d.f(&id).unwrap() as usize;
                let mut t = vec![0i64; f];
                t[..m].copy_from_slice(&head);
                lam_comps.insert(id, t);
            }
        }
        let lambda = Weight::new(&d, lam_comps).unwrap();
        let mut kap_comps = BTreeMap::new();
        for id in d.embedding_ids() {
            let f = d.f(id).unwrap() as usize;
            if f > 0 && rng.gen_bool(0.7) {
                kap_comps.insert(id.to_string(), random_dominant(&mut rng, f, 0, 4));
            }
        }
        let kappa = Weight::new(&d, kap_comps).unwrap();
        let sigma = all_embeddings(&d);
        let op = OperatorDescriptor::new(OperatorKind::Theta {
            sigma,
            lambda: lambda.clone(),
            variant: ThetaVariant::AllGood,
        });
        let result = theta::apply(&d, &op, &kappa).unwrap();
        // Independent target: kappa + lambda + (|lambda|/2)(p-1) at Sigma.
        let total: i64 = lambda
            .components()
            .values()
            .flat_map(|t| t.iter().copied())
            .sum();
        assert_eq!(total % 2, 0);
        let scalar = (total / 2) * (d.p() as i64 - 1);
        let mut expected_comps = BTreeMap::new();
        for id in d.embedding_ids() {
            let f = d.f(id).unwrap() as usize;
            if f == 0 {
                continue;
            }
            let mut t = kappa.component_full(&d, id).unwrap();
            let l = lambda.component_full(&d, id).unwrap();
            for i in 0..f {
                t[i] += l[i] + scalar;
            }
            expected_comps.insert(id.to_string(), t);
        }
        let expected = Weight::new(&d, expected_comps).unwrap();
        assert_eq!(result.target, expected);
        // The general variant differs from allgood exactly by the
        // ||lambda'|| kappa_ha piece (it needs a nonzero lambda').
        if lambda.is_zero() {
            continue;
        }
        let general = OperatorDescriptor::new(OperatorKind::Theta {
            sigma: all_embeddings(&d),
            lambda: lambda.clone(),
            variant: ThetaVariant::General,
        });
        let general_result = theta::apply(&d, &general, &kappa).unwrap();
        let prime = general_result.ledger.lambda_prime.clone().unwrap();
        let norms = weights::weight_stats(&d, &prime).unwrap().norm;
        let diff = weights::HasseWeightVector { exponents: norms }
            .to_weight(&d)
            .unwrap();
        assert_eq!(general_result.target, result.target.add(&d, &diff).unwrap());
        tested += 1;
    }
    c.pass();
}

#[test]
fn ac08_tilde_closure_iteration() {
    let c = Criterion::begin("AC8 closure for iteration");
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let mut tested = 0;
    while tested < 200 {
        let d = random_inert_pair(&mut rng, 6);
        let upsilon: BTreeSet<String> = d.upsilon().into_iter().map(str::to_string).collect();
        // Sigma containing Upsilon.
        let mut sigma = upsilon.clone();
        for id in d.embedding_ids() {
            if rng.gen_bool(0.6) {
                sigma.insert(id.to_string());
            }
        }
        // Random good kappa supported at Sigma.
        let mut comps = BTreeMap::new();
        for id in &sigma {
            let f = d.f(id).unwrap() as usize;
            let oi = d.orbit_index_of(id).unwrap();
            if f == 0 || !rng.gen_bool(0.8) {
                continue;
            }
            if Some(d.f(id).unwrap()) != d.min_positive_f(oi) {
                comps.insert(id.clone(), vec![rng.gen_range(0..5); f]);
            } else {
                comps.insert(id.clone(), random_dominant(&mut rng, f, 0, 4));
            }
        }
        let kappa = Weight::new(&d, comps).unwrap();
        if !weights::is_good(&d, &kappa).unwrap() {
            continue;
        }
        let tau_bar = "tau";
        assert!(
            theta::tilde_closure_check(&d, &sigma, &kappa, tau_bar).unwrap(),
            "closure failed on {:?} with kappa {kappa} sigma {sigma:?}",
            d.to_doc()
        );
        tested += 1;
    }
    c.pass();
}

#[test]
fn ac09_route_consistency() {
    let c = Criterion::begin("AC9 two-route consistency");
    let d = fix_inert21();
    for k in 0..=3i64 {
        let kappa = if k == 0 {
            Weight::zero()
        } else {
            w(&d, &format!("taustar:{k}"))
        };
        assert!(
            theta::compare_weight_consistency(&d, &kappa, "tau").unwrap(),
            "k = {k}"
        );
    }
    c.pass();
}

#[test]
fn ac10_symmetry_constraint() {
    let c = Criterion::begin("AC10 symmetry constraint");
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut symmetric_seen = 0;
    let mut rejected = 0;
    for _ in 0..400 {
        let d = random_case_a(&mut rng, 5, 4);
        let mut comps = BTreeMap::new();
        for id in d.embedding_ids() {
            if rng.gen_bool(0.5) {
                let f = d.f(id).unwrap() as usize;
                comps.insert(id.to_string(), random_dominant(&mut rng, f, 0, 3));
            }
        }
        let lambda = Weight::new(&d, comps).unwrap();
        let op = OperatorDescriptor::new(OperatorKind::MaassShimura {
            lambda: lambda.clone(),
        });
        let applicable = theta::applicable(&d, &op, &Weight::zero()).unwrap();
        if weights::is_symmetric(&d, &lambda).unwrap() {
            symmetric_seen += 1;
            let stats = weights::weight_stats(&d, &lambda).unwrap();
            assert_eq!(stats.total % 2, 0, "symmetric weights have even size");
            let exponent = galois::hecke_exponent(&d, &lambda).unwrap();
            assert_eq!(exponent, (stats.total / 2) as u64);
        } else {
            rejected += 1;
            assert!(!applicable.ok, "non-symmetric lambda must be rejected");
            assert_eq!(applicable.reason.as_deref(), Some("lambda not symmetric"));
        }
    }
    assert!(symmetric_seen > 10, "corpus exercises symmetric weights");
    assert!(rejected > 100, "corpus exercises non-symmetric weights");
    c.pass();
}
