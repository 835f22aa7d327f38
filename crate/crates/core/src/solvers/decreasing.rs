//! Decreasing engine: the alternating orbit x_n = F^n(θ) of a ⪯-decreasing
//! self-map of the cone, whose even subsequence climbs and odd subsequence
//! descends, enclosing the fixed point between them.
//!
//! The engine certifies the full enclosure ordering on stored iterates
//! (x_{2n} ⪯ x_{2n+2} ⪯ x_{2n+3} ⪯ x_{2n+1}), converges when the width
//! ||x_{2n+1} − x_{2n}|| falls below the tolerance, and reports a persistent
//! even/odd gap at the iteration cap as evidence of a genuine 2-cycle (the
//! no-2-cycle condition failing).

use crate::error::{Error, Result};
use crate::norm::{check_dimension, sup_distance};
use crate::order::ConeOrder;
use crate::solvers::{validate_engine_params, IterationTrace, Termination};

/// Outcome of a decreasing-engine run.
///
/// `point` is the even-subsequence limit `even_limit`; `odd_limit` is the
/// odd-subsequence limit; `h1_gap = ||even_limit − odd_limit||` collapses to
/// within the tolerance exactly when the map has no nontrivial 2-cycle along
/// this orbit.
#[derive(Debug, Clone)]
pub struct DecreasingResult {
    pub point: Vec<f64>,
    pub even_limit: Vec<f64>,
    pub odd_limit: Vec<f64>,
    pub h1_gap: f64,
    pub trace: IterationTrace,
}

impl DecreasingResult {
    pub fn converged(&self) -> bool {
        self.trace.terminated_by == Termination::Converged
    }

    /// Width of the last complete enclosing pair (equals `h1_gap` at the end
    /// of a run that stopped on an odd iterate).
    pub fn final_width(&self) -> f64 {
        self.trace
            .sandwich_widths
            .as_ref()
            .and_then(|w| w.last().copied())
            .unwrap_or(self.h1_gap)
    }
}

/// Iterate x_{n+1} = F(x_n) from the origin θ of the cone.
///
/// Cone membership of every image is checked (cone exit is a structured
/// error). The degenerate case F(θ) = θ returns immediately with point θ.
/// Otherwise the zig-zag orderings and the pairwise enclosure are certified
/// on every stored iterate; a violation terminates with
/// [`Termination::OrderViolation`]. Reaching `max_iter` with the even/odd gap
/// still above the tolerance terminates with [`Termination::H1Violation`].
pub fn iterate_decreasing<F>(
    map: F,
    cone: &ConeOrder,
    tol: f64,
    max_iter: usize,
) -> Result<DecreasingResult>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    validate_engine_params(tol, max_iter)?;
    let theta = cone.origin();
    if !cone.membership(&theta)? {
        return Err(Error::PreconditionFailed(
            "cone does not contain its origin".into(),
        ));
    }

    let mut trace = IterationTrace::new(theta.clone(), tol);
    trace.sandwich_widths = Some(Vec::new());

    let x1 = apply(&map, &theta, cone, 1)?;
    trace.residuals.push(sup_distance(&theta, &x1));
    trace.order_certified.push(cone.leq(&theta, &x1)?);
    trace.iterates.push(x1.clone());

    // Degenerate branch: Fθ = θ means the only fixed point is θ itself.
    if x1 == theta {
        trace.terminated_by = Termination::Converged;
        if let Some(w) = trace.sandwich_widths.as_mut() {
            w.push(0.0);
        }
        return Ok(DecreasingResult {
            point: theta.clone(),
            even_limit: theta.clone(),
            odd_limit: x1,
            h1_gap: 0.0,
            trace,
        });
    }

    let width0 = sup_distance(&theta, &x1);
    if let Some(w) = trace.sandwich_widths.as_mut() {
        w.push(width0);
    }
    if width0 <= tol {
        trace.terminated_by = Termination::Converged;
        return Ok(build_result(trace));
    }

    for n in 2..=max_iter {
        let prev = trace.iterates[n - 1].clone();
        let next = apply(&map, &prev, cone, n)?;

        // Zig-zag certificate for the step n-1 -> n: an even iterate sits on
        // the low side of its odd parent.
        let certified = if n.is_multiple_of(2) {
            cone.leq(&next, &prev)?
        } else {
            cone.leq(&prev, &next)?
        };
        trace.residuals.push(sup_distance(&prev, &next));
        trace.order_certified.push(certified);
        trace.iterates.push(next.clone());

        // Enclosure certificate against the grandparent: evens climb, odds
        // descend. Together with the zig-zag this is the full ordering
        // x_{2n} ⪯ x_{2n+2} ⪯ x_{2n+3} ⪯ x_{2n+1} on stored iterates.
        let grand = &trace.iterates[n - 2];
        let enclosure_ok = if n.is_multiple_of(2) {
            cone.leq(grand, &next)?
        } else {
            cone.leq(&next, grand)?
        };
        if !certified || !enclosure_ok {
            trace.terminated_by = Termination::OrderViolation;
            return Ok(build_result(trace));
        }

        if !n.is_multiple_of(2) {
            // A new enclosing pair (x_{n-1}, x_n) is complete.
            let width = sup_distance(&trace.iterates[n - 1], &next);
            if let Some(w) = trace.sandwich_widths.as_mut() {
                w.push(width);
            }
            if width <= tol {
                trace.terminated_by = Termination::Converged;
                return Ok(build_result(trace));
            }
        }
    }

    let mut result = build_result(trace);
    result.trace.terminated_by = if result.h1_gap <= tol {
        Termination::Converged
    } else {
        Termination::H1Violation
    };
    Ok(result)
}

fn apply<F>(map: &F, x: &[f64], cone: &ConeOrder, iteration: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let y = map(x);
    check_dimension(cone.dimension(), &y)?;
    if !cone.membership(&y)? {
        return Err(Error::ConeExit { iteration });
    }
    Ok(y)
}

fn build_result(trace: IterationTrace) -> DecreasingResult {
    let n = trace.iterates.len();
    let (even_idx, odd_idx) = if (n - 1).is_multiple_of(2) {
        (n - 1, n - 2)
    } else {
        (n - 2, n - 1)
    };
    let even_limit = trace.iterates[even_idx].clone();
    let odd_limit = trace.iterates[odd_idx].clone();
    let h1_gap = sup_distance(&even_limit, &odd_limit);
    DecreasingResult {
        point: even_limit.clone(),
        even_limit,
        odd_limit,
        h1_gap,
        trace,
    }
}

/// Follow the orbit y_n = F^{n+1}(z) from an arbitrary cone point z and
/// certify it against a converged reference orbit: even iterates must stay
/// inside [x_{2n}, x_{2n+1}], and the normality inequality
/// ||y_{2n} − x_{2n}|| ≤ λ·||x_{2n+1} − x_{2n}|| is recorded per iterate.
///
/// The run converges when the iterate is within
/// λ·(final sandwich width) + tol of the reference point, with tol taken
/// from the reference run.
pub fn track_arbitrary_start<F>(
    map: F,
    z: &[f64],
    reference: &DecreasingResult,
    cone: &ConeOrder,
    lambda: f64,
    max_iter: usize,
) -> Result<IterationTrace>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    check_dimension(cone.dimension(), z)?;
    if !cone.membership(z)? {
        return Err(Error::PreconditionFailed(
            "start point is not in the cone".into(),
        ));
    }
    if !reference.converged() {
        return Err(Error::PreconditionFailed(
            "reference run did not converge".into(),
        ));
    }
    if lambda < 1.0 || lambda.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be >= 1, got {lambda}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
    }

    let tol = reference.trace.tol;
    let target = lambda * reference.final_width() + tol;
    let ref_orbit = &reference.trace.iterates;

    let y0 = apply(&map, z, cone, 0)?;
    let mut trace = IterationTrace::new(y0, tol);
    trace.normality_certified = Some(vec![true]);
    // Certificates cover the step n -> n+1; the start iterate's own
    // interlacing is checked in the loop below at n = 0.
    let mut n = 0usize;
    loop {
        let y = trace.iterates[n].clone();

        // Interlacing against the reference, where reference data exists:
        // even n: x_n ⪯ y_n ⪯ x_{n+1}; odd n: x_{n+1} ⪯ y_n ⪯ x_n.
        if n + 1 < ref_orbit.len() {
            let (lo, hi) = if n.is_multiple_of(2) {
                (&ref_orbit[n], &ref_orbit[n + 1])
            } else {
                (&ref_orbit[n + 1], &ref_orbit[n])
            };
            let interlaced = cone.leq(lo, &y)? && cone.leq(&y, hi)?;
            let normal_ok = if n.is_multiple_of(2) {
                sup_distance(&y, &ref_orbit[n])
                    <= lambda * sup_distance(&ref_orbit[n + 1], &ref_orbit[n])
            } else {
                true
            };
            if let Some(nc) = trace.normality_certified.as_mut() {
                nc[n] = normal_ok;
            }
            if !interlaced {
                trace.terminated_by = Termination::OrderViolation;
                return Ok(trace);
            }
        }

        if sup_distance(&y, &reference.point) <= target {
            trace.terminated_by = Termination::Converged;
            return Ok(trace);
        }
        if n + 1 >= max_iter {
            trace.terminated_by = Termination::MaxIter;
            return Ok(trace);
        }

        let y_next = apply(&map, &y, cone, n + 1)?;
        trace.residuals.push(sup_distance(&y, &y_next));
        trace.order_certified.push(true);
        trace.iterates.push(y_next);
        if let Some(nc) = trace.normality_certified.as_mut() {
            nc.push(true);
        }
        n += 1;
    }
}
