//! Symmetric sup-inf distance between finite point sets and the fixed-point
//! membership residual.
//!
//! On finite sets the distance is computed exactly by double enumeration
//! (finite sets equal their closures, so the closure subtleties of the
//! continuous theory disappear). Deduplication uses exact bit equality of
//! coordinates, which keeps "distance zero iff equal as sets" crisp.

use crate::error::{Error, Result};
use crate::norm::{check_dimension, Norm};

/// Nonempty finite set of points of uniform dimension, tagged with the norm
/// its distances are measured in.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    norm: Norm,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>, norm: Norm) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput("point set"))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "points must have at least one coordinate".into(),
            ));
        }
        for p in &points {
            check_dimension(dim, p)?;
        }
        Ok(PointSet { points, norm })
    }

    pub fn singleton(point: Vec<f64>, norm: Norm) -> Result<Self> {
        Self::new(vec![point], norm)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn dimension(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    /// Exact bitwise membership.
    pub fn contains_exact(&self, x: &[f64]) -> bool {
        self.points.iter().any(|p| {
            p.len() == x.len()
                && p.iter()
                    .zip(x)
                    .all(|(&a, &b)| a.to_bits() == b.to_bits())
        })
    }

    /// Points with exact duplicates removed (first occurrence kept).
    pub fn deduplicated(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let dup = out.iter().any(|q| {
                q.iter()
                    .zip(p)
                    .all(|(&a, &b)| a.to_bits() == b.to_bits())
            });
            if !dup {
                out.push(p.clone());
            }
        }
        out
    }
}

fn check_compatible(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            got: b.dimension(),
        });
    }
    if a.norm() != b.norm() {
        return Err(Error::NormMismatch {
            left: a.norm(),
            right: b.norm(),
        });
    }
    Ok(())
}

fn directed(from: &[Vec<f64>], to: &[Vec<f64>], norm: Norm) -> f64 {
    let mut worst: f64 = 0.0;
    for x in from {
        let mut nearest = f64::INFINITY;
        for y in to {
            nearest = nearest.min(norm.distance(x, y));
        }
        worst = worst.max(nearest);
    }
    worst
}

/// Symmetric max of the two directed sup-inf distances between A and B,
/// computed exactly by double enumeration.
pub fn delta(a: &PointSet, b: &PointSet) -> Result<f64> {
    check_compatible(a, b)?;
    let norm = a.norm();
    Ok(directed(a.points(), b.points(), norm).max(directed(b.points(), a.points(), norm)))
}

/// Distance of x to the value set S: inf over s in S of ||x − s||.
/// Zero iff x is a member (finite sets are closed).
pub fn membership_residual(x: &[f64], s: &PointSet) -> Result<f64> {
    check_dimension(s.dimension(), x)?;
    let norm = s.norm();
    Ok(s.points()
        .iter()
        .map(|p| norm.distance(x, p))
        .fold(f64::INFINITY, f64::min))
}

/// Diagnostic sequence δ(T xₙ, T x) for a set-valued map along a convergent
/// sequence. The last element of the sequence must lie within `tol` of the
/// limit (in the norm of T's value at the limit); the returned values are the
/// raw distances, with no monotone trend asserted.
pub fn delta_continuity_probe<T>(
    map: T,
    sequence: &[Vec<f64>],
    limit: &[f64],
    tol: f64,
) -> Result<Vec<f64>>
where
    T: Fn(&[f64]) -> Result<PointSet>,
{
    if sequence.is_empty() {
        return Err(Error::EmptyInput("sequence"));
    }
    let at_limit = map(limit)?;
    let norm = at_limit.norm();
    let last = sequence.last().unwrap();
    check_dimension(limit.len(), last)?;
    let last_gap = norm.distance(last, limit);
    if last_gap > tol {
        return Err(Error::PreconditionFailed(format!(
            "sequence does not approach the limit: last-element distance {last_gap} exceeds {tol}"
        )));
    }
    sequence
        .iter()
        .map(|x| delta(&map(x)?, &at_limit))
        .collect()
}
