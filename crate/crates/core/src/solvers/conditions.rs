//! Checkers for the no-2-cycle conditions: the mutual-image condition
//! (F(u) = v and F(v) = u force u = v) and its exact finite-domain
//! counterpart Fix(F²) = Fix(F), which are equivalent.

use crate::delta::PointSet;
use crate::error::{Error, Result};

/// Outcome of [`check_h1`].
#[derive(Debug, Clone)]
pub struct H1Report {
    pub holds: bool,
    /// A mutual-image pair with distinct endpoints, when one was found.
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

/// Scan a candidate set for approximate mutual-image pairs: (u, v) with
/// ||F(u) − v|| ≤ tol and ||F(v) − u|| ≤ tol but ||u − v|| > tol. Returns
/// `holds = false` with the witnessing pair when such a 2-cycle is found.
///
/// Distances use the candidate set's own norm.
pub fn check_h1<F>(map: F, candidates: &PointSet, tol: f64) -> Result<H1Report>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if tol < 0.0 || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be nonnegative and finite, got {tol}"
        )));
    }
    let norm = candidates.norm();
    let points = candidates.points();
    let images: Vec<Vec<f64>> = points.iter().map(|p| map(p)).collect();
    for img in &images {
        if img.len() != candidates.dimension() {
            return Err(Error::DimensionMismatch {
                expected: candidates.dimension(),
                got: img.len(),
            });
        }
    }
    for (i, u) in points.iter().enumerate() {
        for (j, v) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if norm.distance(&images[i], v) <= tol
                && norm.distance(&images[j], u) <= tol
                && norm.distance(u, v) > tol
            {
                return Ok(H1Report {
                    holds: false,
                    witness: Some((u.clone(), v.clone())),
                });
            }
        }
    }
    Ok(H1Report {
        holds: true,
        witness: None,
    })
}

/// A total self-map of a finite abstract domain {0, …, n−1}, given by its
/// image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSelfMap {
    images: Vec<usize>,
}

impl FiniteSelfMap {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::EmptyInput("finite self-map"));
        }
        let n = images.len();
        if let Some(bad) = images.iter().position(|&i| i >= n) {
            return Err(Error::DomainNotClosed { index: bad });
        }
        Ok(FiniteSelfMap { images })
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// Exact report for the equivalence Fix(F²) = Fix(F) ⟺ no distinct 2-cycle,
/// computed by full enumeration of a finite self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Report {
    pub fixed_points: Vec<usize>,
    pub fixed_points_f2: Vec<usize>,
    /// Distinct-endpoint 2-cycles, each reported once as (i, j) with i < j.
    pub two_cycles: Vec<(usize, usize)>,
    /// No distinct-endpoint 2-cycle exists.
    pub h1_holds: bool,
    /// Fix(F²) equals Fix(F).
    pub h2_holds: bool,
    /// The two conditions agree on this map.
    pub equivalent: bool,
}

/// Enumerate Fix(F), Fix(F∘F), and all distinct 2-cycles of a finite
/// self-map, and report whether the two no-2-cycle conditions agree.
pub fn check_h2_equivalence(map: &FiniteSelfMap) -> H2Report {
    let n = map.domain_size();
    let fixed_points: Vec<usize> = (0..n).filter(|&i| map.apply(i) == i).collect();
    let fixed_points_f2: Vec<usize> = (0..n)
        .filter(|&i| map.apply(map.apply(i)) == i)
        .collect();
    let mut two_cycles = Vec::new();
    for i in 0..n {
        let j = map.apply(i);
        if j > i && map.apply(j) == i {
            two_cycles.push((i, j));
        }
    }
    let h1_holds = two_cycles.is_empty();
    let h2_holds = fixed_points == fixed_points_f2;
    H2Report {
        fixed_points,
        fixed_points_f2,
        two_cycles,
        h1_holds,
        h2_holds,
        equivalent: h1_holds == h2_holds,
    }
}
