//! The standard mu-ordinary F-crystal of an orbit and its exact p-adic
//! valuations: Frobenius powers, exterior-power divisibility exponents, the
//! slope-graded ranks of the Hodge filtration, and Verschiebung images.
//!
//! The crystal has one basis vector e_{j,tau} per orbit member tau and index
//! j = 1..n, with eps_{tau,j} = 1 iff f(tau) > n - j. Frobenius maps
//! e_{j,tau} to p^{eps_{tau,j}} e_{j,tau.sigma}: the exponent sits at the
//! source, which is what makes mod-p Verschiebung land inside the Hodge
//! submodule. Frobenius is diagonal in this basis, so valuations are integer
//! sums over the eps matrix; a dense big-integer matrix path is kept as a
//! redundancy oracle.

use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

use crate::datum::{Case, DatumError, ShimuraDatum};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrystalError {
    #[error("case C is not supported by the standard-crystal construction")]
    CaseCUnsupported,
    #[error("f({0}) = 0: the exponent is undefined")]
    ZeroSignature(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("embedding `{0}` is not in this crystal's orbit")]
    NotInOrbit(String),
    #[error("input exceeds the dense-oracle bounds")]
    BoundsExceeded,
    #[error(transparent)]
    Datum(#[from] DatumError),
}

/// Standard mu-ordinary crystal of one orbit: the 0/1 exponent matrix of
/// Frobenius, rows indexed by orbit members in cyclic order, columns by
/// j = 1..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardCrystal {
    orbit_index: usize,
    members: Vec<String>,
    epsilon: Vec<Vec<u8>>,
    n: u32,
    p: u64,
}

/// Build the standard crystal of an orbit (case A only).
pub fn standard_crystal(
    datum: &ShimuraDatum,
    orbit_index: usize,
) -> Result<StandardCrystal, CrystalError> {
    if datum.case() == Case::C {
        return Err(CrystalError::CaseCUnsupported);
    }
    let orbit = &datum.orbits()[orbit_index];
    let n = datum.n();
    let epsilon = orbit
        .members
        .iter()
        .map(|m| {
            let f = datum.f(m).expect("member known");
            (1..=n).map(|j| u8::from(f > n - j)).collect()
        })
        .collect();
    Ok(StandardCrystal {
        orbit_index,
        members: orbit.members.clone(),
        epsilon,
        n,
        p: datum.p(),
    })
}

impl StandardCrystal {
    pub fn orbit_index(&self) -> usize {
        self.orbit_index
    }
    pub fn members(&self) -> &[String] {
        &self.members
    }
    pub fn size(&self) -> usize {
        self.members.len()
    }
    pub fn epsilon(&self) -> &[Vec<u8>] {
        &self.epsilon
    }
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn row(&self, tau: &str) -> Result<&[u8], CrystalError> {
        let pos = self
            .members
            .iter()
            .position(|m| m == tau)
            .ok_or_else(|| CrystalError::NotInOrbit(tau.to_string()))?;
        Ok(&self.epsilon[pos])
    }

    /// Column sums: the valuation of the full Frobenius cycle on e_j.
    fn column_sums(&self) -> Vec<u64> {
        (0..self.n as usize)
            .map(|j| self.epsilon.iter().map(|row| u64::from(row[j])).sum())
            .collect()
    }
}

/// Valuations of phi_tau = (Fr*)^e on the standard basis, sorted
/// non-decreasing. These are the integer slope counts of the orbit polygon.
pub fn phi_valuations(crystal: &StandardCrystal, tau: &str) -> Result<Vec<u64>, CrystalError> {
    crystal.row(tau)?;
    let mut vals = crystal.column_sums();
    vals.sort_unstable();
    Ok(vals)
}

fn crystal_of(datum: &ShimuraDatum, tau: &str) -> Result<StandardCrystal, CrystalError> {
    standard_crystal(datum, datum.orbit_index_of(tau)?)
}

/// Exact divisibility exponent c_{tau*} of the f(tau)-th exterior power of
/// phi_{tau*}: the minimum over f(tau)-subsets of summed valuations.
pub fn c_exponent(datum: &ShimuraDatum, tau: &str) -> Result<u64, CrystalError> {
    let f = datum.f(tau)? as usize;
    if f == 0 {
        return Err(CrystalError::ZeroSignature(tau.to_string()));
    }
    let star = datum.star(tau)?.to_string();
    let crystal = crystal_of(datum, &star)?;
    let vals = phi_valuations(&crystal, &star)?;
    // Sorted, so the minimal subset sum is the sum of the f smallest.
    Ok(vals.iter().take(f).sum())
}

/// The literal orbit-sum formula sum_{tau' in orbit of tau, f(tau') > f(tau)}
/// (f(tau') - f(tau)). Kept for comparison: it disagrees with the crystal
/// valuations on some data, and the CLI reports the discrepancy.
pub fn c_exponent_lemma_literal(datum: &ShimuraDatum, tau: &str) -> Result<u64, CrystalError> {
    let f = datum.f(tau)?;
    if f == 0 {
        return Err(CrystalError::ZeroSignature(tau.to_string()));
    }
    let oi = datum.orbit_index_of(tau)?;
    Ok(datum
        .orbit_signature(oi)
        .into_iter()
        .filter(|&g| g > f)
        .map(|g| u64::from(g - f))
        .sum())
}

/// The slope-sum form of the exponent: sum of the first f(tau) integer slope
/// counts of the orbit of tau*.
pub fn c_exponent_slope_sum(datum: &ShimuraDatum, tau: &str) -> Result<u64, CrystalError> {
    let f = datum.f(tau)? as usize;
    if f == 0 {
        return Err(CrystalError::ZeroSignature(tau.to_string()));
    }
    let star = datum.star(tau)?;
    let counts = crate::polygon::slope_counts(datum, star)
        .map_err(|_| CrystalError::CaseCUnsupported)?;
    Ok(counts.iter().take(f).map(|&c| u64::from(c)).sum())
}

/// Divisibility exponent a_{tau*} of phi_{tau*} itself: the number of
/// members of the orbit of tau* with full signature. Defined when f(tau) is
/// the positive minimum on its orbit; equals the smallest phi valuation.
pub fn a_exponent(datum: &ShimuraDatum, tau: &str) -> Result<u64, CrystalError> {
    let f = datum.f(tau)?;
    let oi = datum.orbit_index_of(tau)?;
    if f == 0 || Some(f) != datum.min_positive_f(oi) {
        return Err(CrystalError::PreconditionViolated(format!(
            "f({tau}) is not the positive minimum on its orbit"
        )));
    }
    let star = datum.star(tau)?.to_string();
    let star_oi = datum.orbit_index_of(&star)?;
    let count = datum
        .orbit_signature(star_oi)
        .into_iter()
        .filter(|&g| g == datum.n())
        .count() as u64;
    let crystal = crystal_of(datum, &star)?;
    let vals = phi_valuations(&crystal, &star)?;
    assert_eq!(count, vals[0], "a-exponent equals the smallest valuation");
    Ok(count)
}

/// For each distinct Frobenius-cycle valuation class (ascending), the number
/// of basis vectors in the class lying in the Hodge submodule at tau. Empty
/// when f(tau) = 0. This is the oracle for the polygon filtration ranks.
pub fn slope_graded_ranks(crystal: &StandardCrystal, tau: &str) -> Result<Vec<u32>, CrystalError> {
    let row = crystal.row(tau)?.to_vec();
    if row.iter().all(|&x| x == 0) {
        return Ok(Vec::new());
    }
    let sums = crystal.column_sums();
    let mut ranks = Vec::new();
    let mut j = 0usize;
    while j < sums.len() {
        let v = sums[j];
        let mut k = j;
        let mut count = 0u32;
        while k < sums.len() && sums[k] == v {
            count += u32::from(row[k]);
            k += 1;
        }
        ranks.push(count);
        j = k;
    }
    Ok(ranks)
}

/// Check that the j-th Verschiebung power of the mod-p crystal carries
/// H^1_{dR} at tau_o . sigma^j into the (twisted) Hodge submodule at tau_o.
/// V = p F^{-1}; on the basis the image of e_{j'} is nonzero mod p exactly
/// when every eps along the chain is 1, and the check is that such vectors
/// satisfy eps = 1 at tau_o.
pub fn verschiebung_image_check(
    datum: &ShimuraDatum,
    crystal: &StandardCrystal,
    tau_o: &str,
    j: usize,
) -> Result<bool, CrystalError> {
    let f = datum.f(tau_o)?;
    let oi = datum.orbit_index_of(tau_o)?;
    if oi != crystal.orbit_index {
        return Err(CrystalError::NotInOrbit(tau_o.to_string()));
    }
    if f == 0 || Some(f) != datum.min_positive_f(oi) {
        return Err(CrystalError::PreconditionViolated(format!(
            "f({tau_o}) is not the positive minimum on its orbit"
        )));
    }
    let e = crystal.size();
    if j == 0 || j > e {
        return Err(CrystalError::PreconditionViolated(format!(
            "j = {j} out of range 1..={e}"
        )));
    }
    let base_row = crystal.row(tau_o)?.to_vec();
    for jj in 0..crystal.n as usize {
        // V^j on e_{jj}: targets tau_o . sigma^i for i = j-1 down to 0; the
        // valuation added at each step is 1 - eps(target).
        let mut valuation = 0u64;
        for i in 0..j {
            let member = datum.sigma_shift(tau_o, i as i64)?;
            let row = crystal.row(member)?;
            valuation += u64::from(1 - row[jj]);
        }
        if valuation == 0 && base_row[jj] == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

const DENSE_MAX_N: u32 = 8;
const DENSE_MAX_E: usize = 8;

fn v_p(x: &BigInt, p: u64) -> u64 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0u64;
    loop {
        let (q, r) = num::Integer::div_rem(&x, &p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// Redundancy oracle for `c_exponent`: builds the full Frobenius of the
/// orbit of tau* as a big-integer matrix, takes its e-th power, extracts the
/// tau* block, forms all f(tau) x f(tau) minors, and reads off the minimal
/// p-adic valuation.
pub fn dense_c_exponent(datum: &ShimuraDatum, tau: &str) -> Result<u64, CrystalError> {
    let f = datum.f(tau)? as usize;
    if f == 0 {
        return Err(CrystalError::ZeroSignature(tau.to_string()));
    }
    let star = datum.star(tau)?.to_string();
    let crystal = crystal_of(datum, &star)?;
    let n = crystal.n as usize;
    let e = crystal.size();
    if crystal.n > DENSE_MAX_N || e > DENSE_MAX_E {
        return Err(CrystalError::BoundsExceeded);
    }
    let dim = n * e;
    let p = BigInt::from(crystal.p);
    // F maps the block of member m to the block of member m+1, picking up
    // p^{eps(source)} on each basis vector.
    let mut frob = vec![vec![BigInt::zero(); dim]; dim];
    for m in 0..e {
        let target = (m + 1) % e;
        for jj in 0..n {
            let val = if crystal.epsilon[m][jj] == 1 {
                p.clone()
            } else {
                BigInt::one()
            };
            frob[target * n + jj][m * n + jj] = val;
        }
    }
    let mut power = identity(dim);
    for _ in 0..e {
        power = mat_mul(&frob, &power);
    }
    let block_at = crystal
        .members
        .iter()
        .position(|m| *m == star)
        .expect("star in its own orbit");
    let rows: Vec<usize> = (0..n).map(|jj| block_at * n + jj).collect();
    let cols = rows.clone();
    // Minimal valuation over all f x f minors of the block.
    let row_sets = subsets(&rows, f);
    let col_sets = subsets(&cols, f);
    let mut best: Option<u64> = None;
    for rs in &row_sets {
        for cs in &col_sets {
            let sub: Vec<Vec<BigInt>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| power[r][c].clone()).collect())
                .collect();
            let det = int_matrix_det(&sub);
            if det.is_zero() {
                continue;
            }
            let v = v_p(&det, crystal.p);
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    best.ok_or_else(|| {
        CrystalError::PreconditionViolated("exterior power vanishes identically".into())
    })
}

fn identity(dim: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); dim]; dim];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let dim = a.len();
    let mut out = vec![vec![BigInt::zero(); dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..dim {
                if b[k][j].is_zero() {
                    continue;
                }
                let add = a[i][k].clone() * b[k][j].clone();
                out[i][j] += add;
            }
        }
    }
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

fn int_matrix_det(m: &[Vec<BigInt>]) -> BigInt {
    // Cofactor expansion; minors here are at most 6x6.
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = BigInt::zero();
    for (j, top) in m[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = top.clone() * int_matrix_det(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon;
    use crate::sample::{fix_def, fix_inert21, fix_split, random_case_a};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn epsilon_fixtures() {
        let d = fix_inert21();
        let c = standard_crystal(&d, 0).unwrap();
        assert_eq!(c.row("tau").unwrap(), &[0, 1, 1]);
        assert_eq!(c.row("taustar").unwrap(), &[0, 0, 1]);

        let s = fix_split();
        let c = standard_crystal(&s, 0).unwrap();
        assert_eq!(c.row("tau1").unwrap(), &[0, 1]);
    }

    #[test]
    fn phi_valuation_fixtures() {
        let d = fix_inert21();
        let c = standard_crystal(&d, 0).unwrap();
        assert_eq!(phi_valuations(&c, "taustar").unwrap(), vec![0, 1, 2]);
        assert_eq!(
            phi_valuations(&c, "taustar").unwrap(),
            polygon::slope_counts(&d, "taustar")
                .unwrap()
                .iter()
                .map(|&x| u64::from(x))
                .collect::<Vec<_>>()
        );
        let s = fix_def();
        let c = standard_crystal(&s, 0).unwrap();
        assert_eq!(phi_valuations(&c, "tau").unwrap(), vec![1, 1]);
    }

    #[test]
    fn c_exponent_fixtures() {
        let d = fix_inert21();
        assert_eq!(c_exponent(&d, "tau").unwrap(), 1);
        assert_eq!(c_exponent(&d, "taustar").unwrap(), 0);
        let s = fix_def();
        assert_eq!(c_exponent(&s, "tau").unwrap(), 2);
        assert!(matches!(
            c_exponent(&s, "taustar"),
            Err(CrystalError::ZeroSignature(_))
        ));
    }

    #[test]
    fn lemma_literal_disagrees_on_inert21() {
        let d = fix_inert21();
        // The literal orbit sum at tau gives 0; the crystal oracle gives 1.
        assert_eq!(c_exponent_lemma_literal(&d, "tau").unwrap(), 0);
        assert_eq!(c_exponent(&d, "tau").unwrap(), 1);
    }

    #[test]
    fn a_exponent_fixtures() {
        let s = fix_def();
        assert_eq!(a_exponent(&s, "tau").unwrap(), 1);
        let d = fix_inert21();
        assert_eq!(a_exponent(&d, "taustar").unwrap(), 0);
        assert!(matches!(
            a_exponent(&d, "tau"),
            Err(CrystalError::PreconditionViolated(_))
        ));
        // c = f * a when f is the positive minimum.
        assert_eq!(
            c_exponent(&s, "tau").unwrap(),
            u64::from(s.f("tau").unwrap()) * a_exponent(&s, "tau").unwrap()
        );
    }

    #[test]
    fn graded_ranks_fixtures() {
        let d = fix_inert21();
        let c = standard_crystal(&d, 0).unwrap();
        assert_eq!(slope_graded_ranks(&c, "tau").unwrap(), vec![0, 1, 1]);
        assert_eq!(slope_graded_ranks(&c, "taustar").unwrap(), vec![0, 0, 1]);
        let s = fix_def();
        let c = standard_crystal(&s, 0).unwrap();
        assert_eq!(slope_graded_ranks(&c, "taustar").unwrap(), Vec::<u32>::new());
    }

    #[test]
    fn verschiebung_fixtures() {
        let d = fix_inert21();
        let c = standard_crystal(&d, 0).unwrap();
        assert!(verschiebung_image_check(&d, &c, "taustar", 1).unwrap());
        assert!(verschiebung_image_check(&d, &c, "taustar", 2).unwrap());
        assert!(matches!(
            verschiebung_image_check(&d, &c, "tau", 1),
            Err(CrystalError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn verschiebung_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let d = random_case_a(&mut rng, 6, 4);
            for (oi, orbit) in d.orbits().iter().enumerate() {
                let Some(minpos) = d.min_positive_f(oi) else { continue };
                let c = standard_crystal(&d, oi).unwrap();
                for tau in &orbit.members {
                    if d.f(tau).unwrap() != minpos {
                        continue;
                    }
                    for j in 1..=orbit.size() {
                        assert!(verschiebung_image_check(&d, &c, tau, j).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn dense_oracle_agrees() {
        let d = fix_inert21();
        assert_eq!(dense_c_exponent(&d, "tau").unwrap(), 1);
        assert_eq!(dense_c_exponent(&d, "taustar").unwrap(), 0);
        let s = fix_def();
        assert_eq!(dense_c_exponent(&s, "tau").unwrap(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..25 {
            let d = random_case_a(&mut rng, 4, 4);
            for id in d.embedding_ids() {
                if d.f(id).unwrap() == 0 {
                    continue;
                }
                assert_eq!(
                    dense_c_exponent(&d, id).unwrap(),
                    c_exponent(&d, id).unwrap(),
                    "dense vs diagonal at {id}"
                );
            }
        }
    }

    #[test]
    fn crystal_level_slope_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let d = random_case_a(&mut rng, 6, 4);
            for (oi, orbit) in d.orbits().iter().enumerate() {
                let c = standard_crystal(&d, oi).unwrap();
                let total: u64 = c.column_sums().iter().sum();
                let sig_sum: u64 = orbit
                    .members
                    .iter()
                    .map(|m| u64::from(d.f(m).unwrap()))
                    .sum();
                assert_eq!(total, sig_sum);
                // Hodge rank at tau equals f(tau).
                for tau in &orbit.members {
                    let rank: u32 = c.row(tau).unwrap().iter().map(|&x| u32::from(x)).sum();
                    assert_eq!(rank, d.f(tau).unwrap());
                }
            }
        }
    }

    #[test]
    fn case_c_unsupported() {
        let c = crate::sample::fix_c();
        assert_eq!(
            standard_crystal(&c, 0).unwrap_err(),
            CrystalError::CaseCUnsupported
        );
    }
}
