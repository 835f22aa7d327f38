//! Builtin maps and kernels exposed by the CLI (and usable from tests).
//!
//! Registries rather than an expression parser: every map the CLI can run is
//! a named, reviewable definition here, and tabulated files cover custom
//! cases.

use std::sync::Arc;

use crate::delta::PointSet;
use crate::error::{Error, Result};
use crate::integral::{IntegralProblem, Quadrature};
use crate::norm::Norm;
use crate::solvers::FiniteSetValuedMap;

/// Shared handle to a single-valued vector map.
pub type VectorMapFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A named single-valued map together with its natural ambient dimension and
/// default start point.
pub struct BuiltinMap {
    pub name: &'static str,
    pub dimension: usize,
    pub default_start: Vec<f64>,
    pub map: VectorMapFn,
}

/// Increasing builtin: name -> map. `param` feeds maps with a free constant.
pub fn increasing_map(name: &str, _param: Option<f64>) -> Result<BuiltinMap> {
    match name {
        // x -> (x + 2)/2, fixed point 2.
        "affine_halfway" => Ok(BuiltinMap {
            name: "affine_halfway",
            dimension: 1,
            default_start: vec![0.0],
            map: Arc::new(|x: &[f64]| vec![(x[0] + 2.0) / 2.0]),
        }),
        "identity" => Ok(BuiltinMap {
            name: "identity",
            dimension: 1,
            default_start: vec![0.0],
            map: Arc::new(|x: &[f64]| x.to_vec()),
        }),
        // Componentwise half-step capped at (3, 2).
        "capped_increment" => Ok(BuiltinMap {
            name: "capped_increment",
            dimension: 2,
            default_start: vec![0.0, 0.0],
            map: Arc::new(|x: &[f64]| vec![(x[0] + 0.5).min(3.0), (x[1] + 0.5).min(2.0)]),
        }),
        other => Err(Error::InvalidParameter(format!(
            "unknown increasing map {other:?} (known: affine_halfway, identity, capped_increment)"
        ))),
    }
}

/// Decreasing builtin: name -> map on the nonnegative half-line.
pub fn decreasing_map(name: &str, param: Option<f64>) -> Result<BuiltinMap> {
    match name {
        // x -> c/(1+x); fixed point is the positive root of x(1+x) = c.
        "c_over_1px" => {
            let c = param.unwrap_or(2.0);
            if c <= 0.0 || c.is_nan() {
                return Err(Error::InvalidParameter(format!(
                    "c_over_1px requires a positive parameter, got {c}"
                )));
            }
            Ok(BuiltinMap {
                name: "c_over_1px",
                dimension: 1,
                default_start: vec![0.0],
                map: Arc::new(move |x: &[f64]| vec![c / (1.0 + x[0])]),
            })
        }
        "zero_map" => Ok(BuiltinMap {
            name: "zero_map",
            dimension: 1,
            default_start: vec![0.0],
            map: Arc::new(|_x: &[f64]| vec![0.0]),
        }),
        // 1/x swaps 2 and 1/2; the orbit from 0 locks into that 2-cycle.
        "designed_two_cycle" => Ok(BuiltinMap {
            name: "designed_two_cycle",
            dimension: 1,
            default_start: vec![0.0],
            map: Arc::new(|x: &[f64]| {
                if x[0] == 0.0 {
                    vec![2.0]
                } else {
                    vec![1.0 / x[0]]
                }
            }),
        }),
        other => Err(Error::InvalidParameter(format!(
            "unknown decreasing map {other:?} (known: c_over_1px, zero_map, designed_two_cycle)"
        ))),
    }
}

/// Set-valued builtin on a small explicit grid.
pub fn setvalued_map(name: &str) -> Result<(FiniteSetValuedMap, Vec<f64>)> {
    match name {
        // T x = {x} on the 3x3 grid: every point is fixed.
        "singleton_identity" => {
            let map = FiniteSetValuedMap::from_fn(grid_points(3, 2), |x| {
                PointSet::singleton(x.to_vec(), Norm::Sup).unwrap()
            })?;
            Ok((map, vec![0.0, 0.0]))
        }
        // The capped one-step walk on {0,1,2}^2.
        "grid_walk" => {
            let map = FiniteSetValuedMap::from_fn(grid_points(3, 2), |x| {
                let right = vec![(x[0] + 1.0).min(2.0), x[1]];
                let up = vec![x[0], (x[1] + 1.0).min(2.0)];
                PointSet::new(vec![x.to_vec(), right, up], Norm::Sup).unwrap()
            })?;
            Ok((map, vec![0.0, 0.0]))
        }
        // Strict climb: stay-put only at the top corner.
        "strict_climb" => {
            let map = FiniteSetValuedMap::from_fn(grid_points(3, 2), |x| {
                let mut pts = Vec::new();
                if x[0] < 2.0 {
                    pts.push(vec![x[0] + 1.0, x[1]]);
                }
                if x[1] < 2.0 {
                    pts.push(vec![x[0], x[1] + 1.0]);
                }
                if pts.is_empty() {
                    pts.push(x.to_vec());
                }
                PointSet::new(pts, Norm::Sup).unwrap()
            })?;
            Ok((map, vec![0.0, 0.0]))
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown set-valued map {other:?} (known: singleton_identity, grid_walk, strict_climb)"
        ))),
    }
}

/// Integer box lattice {0, …, side−1}^dim as grid points.
pub fn grid_points(side: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for p in &pts {
            for k in 0..side {
                let mut q = p.clone();
                q.push(k as f64);
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

/// Builtin kernels for the integral solver. The two separable kernels carry
/// their analytic diagonal limits and run in substitution mode; `zero` and
/// `constant_one` use the skip-mode default.
pub fn kernel_problem(name: &str, grid_size: usize) -> Result<IntegralProblem> {
    match name {
        "zero" => IntegralProblem::new(
            Arc::new(|_x, _y| 0.0),
            1.0,
            1.0,
            grid_size,
            Quadrature::MidpointDiagonalSkip,
        ),
        // R = (x−y)(x+y): the integrand is identically 1.
        "separable_unit" => Ok(IntegralProblem::new(
            Arc::new(|x, y| (x - y) * (x + y)),
            1.0,
            2.0,
            grid_size,
            Quadrature::DiagonalLimitSubstitution,
        )?
        .with_diagonal_limit(Arc::new(|_x| 1.0))),
        // R = x(x−y)(x+y): the integrand is identically x.
        "separable_linear" => Ok(IntegralProblem::new(
            Arc::new(|x, y| x * (x - y) * (x + y)),
            1.0,
            2.0,
            grid_size,
            Quadrature::DiagonalLimitSubstitution,
        )?
        .with_diagonal_limit(Arc::new(|x| x))),
        // Violates the sign condition at every x < y; kept for exercising
        // the validation gate.
        "constant_one" => IntegralProblem::new(
            Arc::new(|_x, _y| 1.0),
            1.0,
            1.0,
            grid_size,
            Quadrature::MidpointDiagonalSkip,
        ),
        other => Err(Error::InvalidParameter(format!(
            "unknown kernel {other:?} (known: zero, separable_unit, separable_linear, constant_one)"
        ))),
    }
}
