//! Monotone fixed-point iteration engines.
//!
//! Three engines: single-valued increasing, set-valued increasing, and
//! decreasing on a cone, plus checkers for the no-2-cycle conditions and a
//! brute-force fixed-point analyzer for finite set-valued maps.
//!
//! Every engine certifies the order relations its convergence argument
//! consumes along the orbit (never globally), records them in an
//! [`IterationTrace`], and measures residuals in the sup norm. Order
//! certificates compare coordinates exactly; a stalled step (x_{n+1} = x_n)
//! counts as certified because ⪯ is reflexive.

mod conditions;
mod decreasing;
mod increasing;
mod poset;
mod setvalued;

pub use conditions::{check_h1, check_h2_equivalence, FiniteSelfMap, H1Report, H2Report};
pub use decreasing::{iterate_decreasing, track_arbitrary_start, DecreasingResult};
pub use increasing::iterate_increasing;
pub use poset::{enumerate_fixed_points, PosetAnalysis};
pub use setvalued::{iterate_setvalued, FiniteSetValuedMap, Selector, SetValuedMap};

use serde::Serialize;

use crate::error::{Error, Result};

/// Why an engine stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIter,
    OrderViolation,
    H1Violation,
}

/// The recorded orbit of an engine run.
///
/// `residuals[n]` and `order_certified[n]` describe the step from
/// `iterates[n]` to `iterates[n+1]`, so both have length one less than
/// `iterates`. `sandwich_widths` is populated by the decreasing engine only:
/// entry n is the width of the enclosing pair (x_{2n}, x_{2n+1}).
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub iterates: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub order_certified: Vec<bool>,
    pub sandwich_widths: Option<Vec<f64>>,
    /// Per-iterate normality certificates recorded by `track_arbitrary_start`.
    pub normality_certified: Option<Vec<bool>>,
    pub terminated_by: Termination,
    /// The tolerance the run was requested with.
    pub tol: f64,
}

impl IterationTrace {
    pub(crate) fn new(start: Vec<f64>, tol: f64) -> Self {
        IterationTrace {
            iterates: vec![start],
            residuals: Vec::new(),
            order_certified: Vec::new(),
            sandwich_widths: None,
            normality_certified: None,
            terminated_by: Termination::MaxIter,
            tol,
        }
    }

    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }

    /// Number of applications of the map (steps taken).
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn last(&self) -> &[f64] {
        self.iterates.last().expect("trace holds at least the start")
    }
}

/// Outcome of an increasing-engine run (single- or set-valued).
#[derive(Debug, Clone)]
pub struct FixedPointResult {
    pub point: Vec<f64>,
    pub trace: IterationTrace,
    /// Recomputed residual at `point`: ||F(point) − point|| for single-valued
    /// maps, the membership residual in T(point) for set-valued ones.
    pub residual: f64,
    /// leq(x0, point) under the run's cone order.
    pub above_start: bool,
}

/// A zero tolerance is allowed: it demands an exact fixed point, which is
/// meaningful on integer grids.
pub(crate) fn validate_engine_params(tol: f64, max_iter: usize) -> Result<()> {
    if tol < 0.0 || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be nonnegative and finite, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
    }
    Ok(())
}
