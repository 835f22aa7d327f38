//! Brute-force fixed-point analyzer for finite set-valued maps: enumerates
//! every x with x ∈ T(x) exactly and reports the ⪯-maximal and ⪯-minimal
//! elements of that set.

use serde::Serialize;

use crate::error::Result;
use crate::order::ConeOrder;
use crate::solvers::setvalued::FiniteSetValuedMap;

/// Exact fixed-point census of a finite set-valued map. Point lists are
/// plain vectors because the fixed-point set may be empty.
#[derive(Debug, Clone, Serialize)]
pub struct PosetAnalysis {
    pub fixed_points: Vec<Vec<f64>>,
    pub maximal: Vec<Vec<f64>>,
    pub minimal: Vec<Vec<f64>>,
    pub is_nonempty: bool,
}

/// Enumerate all fixed points of T (exact membership, bit equality) and the
/// maximal/minimal elements of the fixed-point set under the cone order.
pub fn enumerate_fixed_points(
    map: &FiniteSetValuedMap,
    cone: &ConeOrder,
) -> Result<PosetAnalysis> {
    let mut fixed: Vec<Vec<f64>> = Vec::new();
    for x in map.domain() {
        if map.value_at(x)?.contains_exact(x) {
            fixed.push(x.clone());
        }
    }

    let mut maximal = Vec::new();
    let mut minimal = Vec::new();
    for (i, x) in fixed.iter().enumerate() {
        let mut is_max = true;
        let mut is_min = true;
        for (j, y) in fixed.iter().enumerate() {
            if i == j {
                continue;
            }
            if cone.leq(x, y)? && !cone.leq(y, x)? {
                is_max = false;
            }
            if cone.leq(y, x)? && !cone.leq(x, y)? {
                is_min = false;
            }
        }
        if is_max {
            maximal.push(x.clone());
        }
        if is_min {
            minimal.push(x.clone());
        }
    }

    Ok(PosetAnalysis {
        is_nonempty: !fixed.is_empty(),
        fixed_points: fixed,
        maximal,
        minimal,
    })
}
