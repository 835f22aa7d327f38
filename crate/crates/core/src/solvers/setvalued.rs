//! Set-valued increasing engine: x_{n+1} chosen from the upper candidates
//! { w ∈ T(x_n) : x_n ⪯ w }, with fixed-point detection via the membership
//! residual.

use serde::{Deserialize, Serialize};

use crate::delta::{membership_residual, PointSet};
use crate::error::{Error, Result};
use crate::norm::check_dimension;
use crate::order::ConeOrder;
use crate::solvers::{validate_engine_params, FixedPointResult, IterationTrace, Termination};

/// A set-valued mapping: each point gets a nonempty finite value set.
pub trait SetValuedMap {
    fn value(&self, x: &[f64]) -> Result<PointSet>;
}

impl<F> SetValuedMap for F
where
    F: Fn(&[f64]) -> Result<PointSet>,
{
    fn value(&self, x: &[f64]) -> Result<PointSet> {
        self(x)
    }
}

/// A total set-valued map on an explicit finite domain (grid points of an
/// orthant-ordered box). Every value set must lie inside the domain, so
/// orbits cannot escape it.
#[derive(Debug, Clone)]
pub struct FiniteSetValuedMap {
    domain: Vec<Vec<f64>>,
    values: Vec<PointSet>,
}

impl FiniteSetValuedMap {
    pub fn new(domain: Vec<Vec<f64>>, values: Vec<PointSet>) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::EmptyInput("finite map domain"));
        }
        if domain.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "domain has {} points but {} value sets were supplied",
                domain.len(),
                values.len()
            )));
        }
        let dim = domain[0].len();
        for p in &domain {
            check_dimension(dim, p)?;
        }
        for (i, p) in domain.iter().enumerate() {
            if domain[..i].iter().any(|q| exact_eq(q, p)) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate domain point at index {i}"
                )));
            }
        }
        let in_domain =
            |x: &[f64]| domain.iter().any(|p| exact_eq(p, x));
        for set in &values {
            for v in set.points() {
                if !in_domain(v) {
                    return Err(Error::NotInDomain(v.clone()));
                }
            }
        }
        Ok(FiniteSetValuedMap { domain, values })
    }

    /// Build a finite map by evaluating a closure on every domain point.
    pub fn from_fn<F>(domain: Vec<Vec<f64>>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> PointSet,
    {
        let values = domain.iter().map(|p| f(p)).collect();
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &[Vec<f64>] {
        &self.domain
    }

    pub fn value_at(&self, x: &[f64]) -> Result<&PointSet> {
        self.domain
            .iter()
            .position(|p| exact_eq(p, x))
            .map(|i| &self.values[i])
            .ok_or_else(|| Error::NotInDomain(x.to_vec()))
    }
}

impl SetValuedMap for FiniteSetValuedMap {
    fn value(&self, x: &[f64]) -> Result<PointSet> {
        self.value_at(x).cloned()
    }
}

fn exact_eq(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(&p, &q)| p.to_bits() == q.to_bits())
}

/// Deterministic rule for picking the successor among the upper candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    /// A ⪯-minimal candidate, ties broken lexicographically.
    LeastUpperCandidate,
    /// Candidate closest to the current iterate in the value set's norm.
    MinNormStep,
    /// Lexicographically smallest candidate.
    Lexicographic,
}

impl std::str::FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "least_upper_candidate" => Ok(Selector::LeastUpperCandidate),
            "min_norm_step" => Ok(Selector::MinNormStep),
            "lexicographic" => Ok(Selector::Lexicographic),
            other => Err(Error::InvalidParameter(format!(
                "unknown selector {other:?}"
            ))),
        }
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (&p, &q) in a.iter().zip(b) {
        if p < q {
            return true;
        }
        if p > q {
            return false;
        }
    }
    false
}

fn select(
    selector: Selector,
    current: &[f64],
    candidates: &[Vec<f64>],
    cone: &ConeOrder,
    set: &PointSet,
) -> Result<Vec<f64>> {
    debug_assert!(!candidates.is_empty());
    match selector {
        Selector::Lexicographic => {
            let mut best = &candidates[0];
            for c in &candidates[1..] {
                if lex_less(c, best) {
                    best = c;
                }
            }
            Ok(best.clone())
        }
        Selector::MinNormStep => {
            let norm = set.norm();
            let mut best = &candidates[0];
            let mut best_d = norm.distance(current, best);
            for c in &candidates[1..] {
                let d = norm.distance(current, c);
                if d < best_d || (d == best_d && lex_less(c, best)) {
                    best = c;
                    best_d = d;
                }
            }
            Ok(best.clone())
        }
        Selector::LeastUpperCandidate => {
            // ⪯-minimal candidates, then lexicographic among those.
            let mut minimal: Vec<&Vec<f64>> = Vec::new();
            'outer: for c in candidates {
                for d in candidates {
                    if !exact_eq(c, d) && cone.leq(d, c)? && !cone.leq(c, d)? {
                        continue 'outer;
                    }
                }
                minimal.push(c);
            }
            let pool = if minimal.is_empty() {
                candidates.iter().collect()
            } else {
                minimal
            };
            let mut best = pool[0];
            for c in &pool[1..] {
                if lex_less(c, best) {
                    best = c;
                }
            }
            Ok(best.clone())
        }
    }
}

/// Iterate x_{n+1} ∈ T(x_n) with x_n ⪯ x_{n+1}, converging when the
/// membership residual of the current iterate in its own value set falls
/// below `tol`.
///
/// The precondition (some w ∈ T(x0) with x0 ⪯ w) is checked up front.
/// If at a later step no upper candidate exists, that is evidence against
/// isotonicity and the run terminates with [`Termination::OrderViolation`].
pub fn iterate_setvalued<T>(
    map: &T,
    x0: &[f64],
    cone: &ConeOrder,
    tol: f64,
    max_iter: usize,
    selector: Selector,
) -> Result<FixedPointResult>
where
    T: SetValuedMap + ?Sized,
{
    validate_engine_params(tol, max_iter)?;
    check_dimension(cone.dimension(), x0)?;

    let start_set = map.value(x0)?;
    let mut has_upper = false;
    for w in start_set.points() {
        if cone.leq(x0, w)? {
            has_upper = true;
            break;
        }
    }
    if !has_upper {
        return Err(Error::PreconditionFailed(
            "no w ∈ T(x0) with x0 ⪯ w".into(),
        ));
    }

    let mut trace = IterationTrace::new(x0.to_vec(), tol);
    let mut current = x0.to_vec();
    let mut current_set = start_set;
    let mut best = (x0.to_vec(), membership_residual(x0, &current_set)?);

    if best.1 <= tol {
        trace.terminated_by = Termination::Converged;
        return Ok(FixedPointResult {
            point: best.0.clone(),
            trace,
            residual: best.1,
            above_start: true,
        });
    }

    for _ in 0..max_iter {
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        for w in current_set.points() {
            if cone.leq(&current, w)? {
                candidates.push(w.clone());
            }
        }
        if candidates.is_empty() {
            trace.terminated_by = Termination::OrderViolation;
            return finish(map, trace, cone, x0, best);
        }
        let next = select(selector, &current, &candidates, cone, &current_set)?;
        let certified = cone.leq(&current, &next)?;
        let next_set = map.value(&next)?;
        let residual = membership_residual(&next, &next_set)?;
        trace.iterates.push(next.clone());
        trace.order_certified.push(certified);
        trace.residuals.push(residual);
        if residual < best.1 {
            best = (next.clone(), residual);
        }
        if residual <= tol {
            trace.terminated_by = Termination::Converged;
            return finish(map, trace, cone, x0, (next, residual));
        }
        current = next;
        current_set = next_set;
    }
    trace.terminated_by = Termination::MaxIter;
    finish(map, trace, cone, x0, best)
}

fn finish<T>(
    map: &T,
    trace: IterationTrace,
    cone: &ConeOrder,
    x0: &[f64],
    best: (Vec<f64>, f64),
) -> Result<FixedPointResult>
where
    T: SetValuedMap + ?Sized,
{
    let (point, _) = best;
    let residual = membership_residual(&point, &map.value(&point)?)?;
    let above_start = cone.leq(x0, &point)?;
    Ok(FixedPointResult {
        point,
        trace,
        residual,
        above_start,
    })
}
