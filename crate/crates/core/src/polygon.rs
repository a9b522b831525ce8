//! Mu-ordinary Newton polygons, ordinariness, slope counts, and the ranks of
//! the slope filtration on the Hodge bundle.
//!
//! Slopes are exact rationals; slope j of the orbit polygon counts the
//! fraction of orbit members whose signature exceeds n - j.

use num::rational::Ratio;
use thiserror::Error;

use crate::datum::{Case, DatumError, ShimuraDatum};

pub type Slope = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolygonError {
    #[error("case C is not supported by the mu-ordinary polygon formula")]
    CaseCUnsupported,
    #[error(transparent)]
    Datum(#[from] DatumError),
}

/// Non-decreasing multiset of exact rational slopes in [0, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    slopes: Vec<Slope>,
}

impl NewtonPolygon {
    pub fn from_slopes(mut slopes: Vec<Slope>) -> Self {
        slopes.sort_unstable();
        NewtonPolygon { slopes }
    }

    pub fn slopes(&self) -> &[Slope] {
        &self.slopes
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn is_ordinary(&self) -> bool {
        self.slopes
            .iter()
            .all(|s| *s == Ratio::from_integer(0) || *s == Ratio::from_integer(1))
    }

    /// Vertices (x, y) of the polygon: partial sums of slopes, starting at
    /// the origin, one breakpoint per slope change.
    pub fn breakpoints(&self) -> Vec<(i64, Slope)> {
        let mut pts = vec![(0i64, Ratio::from_integer(0))];
        let mut y = Ratio::from_integer(0);
        for (i, s) in self.slopes.iter().enumerate() {
            y += s;
            let last = i + 1 == self.slopes.len();
            if last || self.slopes[i + 1] != *s {
                pts.push(((i + 1) as i64, y));
            }
        }
        pts
    }
}

/// The mu-ordinary polygon of a single orbit: slopes
/// a_j = #{tau in orbit : f(tau) > n - j} / e for j = 1..n.
pub fn orbit_polygon(
    datum: &ShimuraDatum,
    orbit_index: usize,
) -> Result<NewtonPolygon, PolygonError> {
    if datum.case() == Case::C {
        return Err(PolygonError::CaseCUnsupported);
    }
    let counts = orbit_counts(datum, orbit_index);
    let e = datum.orbits()[orbit_index].size() as i64;
    Ok(NewtonPolygon {
        slopes: counts
            .into_iter()
            .map(|c| Ratio::new(c as i64, e))
            .collect(),
    })
}

fn orbit_counts(datum: &ShimuraDatum, orbit_index: usize) -> Vec<u32> {
    let sig = datum.orbit_signature(orbit_index);
    let n = datum.n();
    (1..=n)
        .map(|j| sig.iter().filter(|&&f| f > n - j).count() as u32)
        .collect()
}

/// Amalgamate sum: merged sorted multiset of slopes.
pub fn amalgamate(polygons: &[NewtonPolygon]) -> NewtonPolygon {
    let mut slopes: Vec<Slope> = polygons.iter().flat_map(|p| p.slopes.clone()).collect();
    slopes.sort_unstable();
    NewtonPolygon { slopes }
}

/// The full mu-ordinary polygon of the datum.
pub fn datum_polygon(datum: &ShimuraDatum) -> Result<NewtonPolygon, PolygonError> {
    let polys: Vec<NewtonPolygon> = (0..datum.orbits().len())
        .map(|oi| orbit_polygon(datum, oi))
        .collect::<Result<_, _>>()?;
    Ok(amalgamate(&polys))
}

/// True iff every orbit polygon has all slopes in {0, 1}; equivalently the
/// signature is constant on every orbit.
pub fn is_ordinary(datum: &ShimuraDatum) -> Result<bool, PolygonError> {
    if datum.case() == Case::C {
        return Err(PolygonError::CaseCUnsupported);
    }
    for oi in 0..datum.orbits().len() {
        if !orbit_polygon(datum, oi)?.is_ordinary() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integer slope counts a_i = #{tau' in the orbit of tau : f(tau') > n - i},
/// i = 1..n. Equals e times the orbit polygon slopes, entrywise.
pub fn slope_counts(datum: &ShimuraDatum, tau: &str) -> Result<Vec<u32>, PolygonError> {
    let oi = datum.orbit_index_of(tau)?;
    Ok(orbit_counts(datum, oi))
}

/// Ranks m_{t,tau} of the graded pieces of the slope filtration on the
/// tau-component of the Hodge bundle, one entry per distinct slope of the
/// orbit polygon (ascending). Empty when f(tau) = 0.
pub fn filtration_ranks(datum: &ShimuraDatum, tau: &str) -> Result<Vec<u32>, PolygonError> {
    if datum.case() == Case::C {
        return Err(PolygonError::CaseCUnsupported);
    }
    let f = datum.f(tau)?;
    if f == 0 {
        return Ok(Vec::new());
    }
    let oi = datum.orbit_index_of(tau)?;
    let counts = orbit_counts(datum, oi);
    let n = datum.n();
    let mut ranks = Vec::new();
    let mut t_start = 0usize;
    while t_start < counts.len() {
        let c = counts[t_start];
        let mut t_end = t_start;
        while t_end < counts.len() && counts[t_end] == c {
            t_end += 1;
        }
        // Slope class = { j : a_j = c }; member j contributes iff f > n - j.
        let m = (t_start..t_end)
            .filter(|&idx| {
                let j = (idx + 1) as u32;
                f > n - j
            })
            .count() as u32;
        ranks.push(m);
        t_start = t_end;
    }
    Ok(ranks)
}
