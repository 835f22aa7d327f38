//! Single-valued increasing engine: the orbit x_{n+1} = F(x_n) from a point
//! with x_0 ⪯ F(x_0), certified as a ⪯-chain step by step.

use crate::error::{Error, Result};
use crate::norm::{check_dimension, sup_distance};
use crate::order::ConeOrder;
use crate::solvers::{validate_engine_params, FixedPointResult, IterationTrace, Termination};

/// Iterate x_{n+1} = F(x_n) until the sup-norm step falls below `tol`.
///
/// The precondition x0 ⪯ F(x0) is checked up front and fails with a
/// structured error. F is expected ⪯-increasing; that is certified along the
/// orbit only, and a violated step terminates the run with
/// [`Termination::OrderViolation`] (the offending step is the first `false`
/// in the trace's certificates). Hitting `max_iter` returns the last iterate.
pub fn iterate_increasing<F>(
    map: F,
    x0: &[f64],
    cone: &ConeOrder,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointResult>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    validate_engine_params(tol, max_iter)?;
    check_dimension(cone.dimension(), x0)?;

    let fx0 = apply(&map, x0, cone.dimension())?;
    if !cone.leq(x0, &fx0)? {
        return Err(Error::PreconditionFailed(
            "x0 ⪯ F(x0) does not hold".into(),
        ));
    }

    let mut trace = IterationTrace::new(x0.to_vec(), tol);
    let mut current = x0.to_vec();
    let mut next = fx0;
    for _ in 0..max_iter {
        let certified = cone.leq(&current, &next)?;
        let step = sup_distance(&current, &next);
        trace.iterates.push(next.clone());
        trace.residuals.push(step);
        trace.order_certified.push(certified);
        if !certified {
            trace.terminated_by = Termination::OrderViolation;
            return Ok(finish(map, trace, cone, x0));
        }
        if step <= tol {
            trace.terminated_by = Termination::Converged;
            return Ok(finish(map, trace, cone, x0));
        }
        current = next;
        next = apply(&map, &current, cone.dimension())?;
    }
    trace.terminated_by = Termination::MaxIter;
    Ok(finish(map, trace, cone, x0))
}

fn apply<F>(map: &F, x: &[f64], dim: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let y = map(x);
    check_dimension(dim, &y)?;
    Ok(y)
}

fn finish<F>(map: F, trace: IterationTrace, cone: &ConeOrder, x0: &[f64]) -> FixedPointResult
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    // Last iterate is the top of the certified chain; recompute its residual.
    let point = trace.last().to_vec();
    let residual = sup_distance(&map(&point), &point);
    let above_start = cone.leq(x0, &point).unwrap_or(false);
    FixedPointResult {
        point,
        trace,
        residual,
        above_start,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthant(d: usize) -> ConeOrder {
        ConeOrder::orthant(d).unwrap()
    }

    #[test]
    fn affine_halfway_converges_to_two() {
        // x = (x + 2) / 2 has the unique fixed point 2.
        let result = iterate_increasing(
            |x: &[f64]| vec![(x[0] + 2.0) / 2.0],
            &[0.0],
            &orthant(1),
            1e-10,
            200,
        )
        .unwrap();
        assert_eq!(result.trace.terminated_by, Termination::Converged);
        assert!((result.point[0] - 2.0).abs() <= 1e-9);
        assert!(result.residual <= 1e-10);
        assert!(result.above_start);
        assert!(result.trace.order_certified.iter().all(|&c| c));
        assert_eq!(result.trace.residuals.len(), result.trace.iterates.len() - 1);
        assert_eq!(
            result.trace.order_certified.len(),
            result.trace.iterates.len() - 1
        );
    }

    #[test]
    fn identity_map_converges_at_step_one() {
        let result =
            iterate_increasing(|x: &[f64]| x.to_vec(), &[0.0], &orthant(1), 1e-10, 50).unwrap();
        assert_eq!(result.trace.terminated_by, Termination::Converged);
        assert_eq!(result.trace.steps(), 1);
        assert_eq!(result.point, vec![0.0]);
    }

    // Brute-force orbit oracle for the capped-increment map: the orbit
    // reaches the cap in finitely many steps.
    fn capped(x: &[f64]) -> Vec<f64> {
        vec![(x[0] + 0.5).min(3.0), (x[1] + 0.5).min(2.0)]
    }

    #[test]
    fn capped_increment_reaches_cap_exactly() {
        let mut orbit = vec![vec![0.0, 0.0]];
        loop {
            let next = capped(orbit.last().unwrap());
            if next == *orbit.last().unwrap() {
                break;
            }
            orbit.push(next);
        }
        assert_eq!(orbit.last().unwrap(), &vec![3.0, 2.0]);

        let result =
            iterate_increasing(capped, &[0.0, 0.0], &orthant(2), 1e-10, 100).unwrap();
        assert_eq!(result.trace.terminated_by, Termination::Converged);
        assert_eq!(result.point, vec![3.0, 2.0]);
        assert_eq!(result.residual, 0.0);
        assert!(result.trace.order_certified.iter().all(|&c| c));
    }

    #[test]
    fn precondition_failure_is_structured() {
        // F(x) = x - 1 sits strictly below the start.
        let err = iterate_increasing(
            |x: &[f64]| vec![x[0] - 1.0],
            &[0.0],
            &orthant(1),
            1e-10,
            50,
        );
        assert!(matches!(err, Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn order_violation_terminates_with_certificate() {
        // Increasing at the start, then drops: 0 -> 1 -> 2 -> 1.5 ...
        let map = |x: &[f64]| {
            if x[0] < 2.0 {
                vec![x[0] + 1.0]
            } else {
                vec![1.5]
            }
        };
        let result = iterate_increasing(map, &[0.0], &orthant(1), 1e-10, 50).unwrap();
        assert_eq!(result.trace.terminated_by, Termination::OrderViolation);
        let bad = result.trace.order_certified.iter().position(|&c| !c);
        assert_eq!(bad, Some(2));
    }

    #[test]
    fn max_iter_returns_last_iterate() {
        let result = iterate_increasing(
            |x: &[f64]| vec![x[0] + 1.0],
            &[0.0],
            &orthant(1),
            1e-10,
            5,
        )
        .unwrap();
        assert_eq!(result.trace.terminated_by, Termination::MaxIter);
        assert_eq!(result.point, vec![5.0]);
        assert_eq!(result.trace.steps(), 5);
    }

    #[test]
    fn orbit_is_a_chain_below_the_result() {
        let cone = orthant(2);
        let result =
            iterate_increasing(capped, &[0.25, 0.0], &cone, 1e-10, 100).unwrap();
        for w in result.trace.iterates.windows(2) {
            assert!(cone.leq(&w[0], &w[1]).unwrap());
        }
        for it in &result.trace.iterates {
            assert!(cone.leq(it, &result.point).unwrap());
        }
    }
}
