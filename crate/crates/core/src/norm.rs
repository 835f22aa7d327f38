//! Vector norms and small vector helpers used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm on R^n. All three are monotone: 0 <= x <= y componentwise
/// implies eval(x) <= eval(y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Sup,
    Euclidean,
    L1,
}

impl Norm {
    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            Norm::Sup => v.iter().fold(0.0, |m, &c| m.max(c.abs())),
            Norm::Euclidean => v.iter().map(|&c| c * c).sum::<f64>().sqrt(),
            Norm::L1 => v.iter().map(|&c| c.abs()).sum(),
        }
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        match self {
            Norm::Sup => x
                .iter()
                .zip(y)
                .fold(0.0, |m, (&a, &b)| m.max((a - b).abs())),
            Norm::Euclidean => x
                .iter()
                .zip(y)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            Norm::L1 => x.iter().zip(y).map(|(&a, &b)| (a - b).abs()).sum(),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" => Ok(Norm::Sup),
            "euclidean" => Ok(Norm::Euclidean),
            "l1" => Ok(Norm::L1),
            other => Err(Error::InvalidParameter(format!(
                "unknown norm {other:?} (expected sup, euclidean, or l1)"
            ))),
        }
    }
}

/// Sup-norm distance; the residual norm used by the iteration engines.
pub fn sup_distance(x: &[f64], y: &[f64]) -> f64 {
    Norm::Sup.distance(x, y)
}

pub(crate) fn check_dimension(expected: usize, v: &[f64]) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        })
    }
}

pub(crate) fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(&a, &b)| a - b).collect()
}
