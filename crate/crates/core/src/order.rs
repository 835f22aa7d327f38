//! Cone-induced partial orders on R^n.
//!
//! A closed convex pointed cone K induces the order x ⪯ y iff y − x ∈ K.
//! This module represents cone descriptors, order intervals, chain suprema,
//! and normality-constant estimation. Order comparisons are exact coordinate
//! comparisons; no tolerance enters the order predicate, so every certificate
//! recorded by the iteration engines is unambiguous.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::norm::{check_dimension, sub, Norm};

/// Membership predicate for a custom cone.
pub type MembershipFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// The kind of cone backing a [`ConeOrder`].
#[derive(Clone)]
pub enum ConeKind {
    /// The nonnegative orthant { x : x_i >= 0 }.
    Orthant,
    /// Positively weighted orthant. With positive weights this describes the
    /// same point set as the orthant; the weights are part of the descriptor.
    WeightedOrthant(Vec<f64>),
    /// Opaque membership predicate. Cone axioms are spot-checked, never proven.
    Custom(MembershipFn),
}

impl fmt::Debug for ConeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeKind::Orthant => write!(f, "Orthant"),
            ConeKind::WeightedOrthant(w) => write!(f, "WeightedOrthant({w:?})"),
            ConeKind::Custom(_) => write!(f, "Custom(<predicate>)"),
        }
    }
}

/// A closed convex cone descriptor inducing ⪯ on R^n.
#[derive(Debug, Clone)]
pub struct ConeOrder {
    dimension: usize,
    kind: ConeKind,
    is_lattice: bool,
}

impl ConeOrder {
    /// The nonnegative orthant in R^dimension.
    pub fn orthant(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter(
                "cone dimension must be positive".into(),
            ));
        }
        Ok(ConeOrder {
            dimension,
            kind: ConeKind::Orthant,
            is_lattice: true,
        })
    }

    /// Weighted orthant; weights must be strictly positive.
    pub fn weighted_orthant(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter(
                "cone dimension must be positive".into(),
            ));
        }
        if weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "weighted orthant weights must be positive and finite".into(),
            ));
        }
        Ok(ConeOrder {
            dimension: weights.len(),
            kind: ConeKind::WeightedOrthant(weights),
            is_lattice: true,
        })
    }

    /// Cone given by an opaque membership predicate. Not assumed to be a lattice.
    pub fn custom(dimension: usize, membership: MembershipFn) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter(
                "cone dimension must be positive".into(),
            ));
        }
        Ok(ConeOrder {
            dimension,
            kind: ConeKind::Custom(membership),
            is_lattice: false,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn is_lattice(&self) -> bool {
        self.is_lattice
    }

    /// Does x belong to the cone K?
    pub fn membership(&self, x: &[f64]) -> Result<bool> {
        check_dimension(self.dimension, x)?;
        Ok(match &self.kind {
            ConeKind::Orthant | ConeKind::WeightedOrthant(_) => x.iter().all(|&c| c >= 0.0),
            ConeKind::Custom(pred) => pred(x),
        })
    }

    /// The induced order: x ⪯ y iff y − x ∈ K. Exact coordinate comparison.
    pub fn leq(&self, x: &[f64], y: &[f64]) -> Result<bool> {
        check_dimension(self.dimension, x)?;
        check_dimension(self.dimension, y)?;
        self.membership(&sub(y, x))
    }

    /// The zero vector of the ambient space.
    pub fn origin(&self) -> Vec<f64> {
        vec![0.0; self.dimension]
    }
}

/// Order interval [lower, upper] = { x : lower ⪯ x ⪯ upper }.
#[derive(Debug, Clone)]
pub struct OrderInterval {
    lower: Vec<f64>,
    upper: Vec<f64>,
    cone: ConeOrder,
}

impl OrderInterval {
    /// Construct the interval; fails unless lower ⪯ upper.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, cone: ConeOrder) -> Result<Self> {
        if !cone.leq(&lower, &upper)? {
            return Err(Error::PreconditionFailed(
                "order interval requires lower ⪯ upper".into(),
            ));
        }
        Ok(OrderInterval { lower, upper, cone })
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// true iff lower ⪯ x and x ⪯ upper.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(self.cone.leq(&self.lower, x)? && self.cone.leq(x, &self.upper)?)
    }
}

/// Result of [`estimate_normality_constant`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormalityEstimate {
    /// sup of ||x||/||y|| over sampled pairs 0 ⪯ x ⪯ y; a lower bound for λ.
    pub lambda_lower_bound: f64,
    /// Number of sampled pairs that actually contributed a ratio.
    pub samples_used: usize,
    /// Known value of λ, when one exists (1 for orthant kinds with a monotone norm).
    pub analytic_value: Option<f64>,
}

/// Least upper bound of a finite chain: its ⪯-greatest element.
///
/// The input must be totally ordered under the cone order; an incomparable
/// pair is reported by index.
pub fn chain_sup(chain: &[Vec<f64>], cone: &ConeOrder) -> Result<Vec<f64>> {
    if chain.is_empty() {
        return Err(Error::EmptyInput("chain"));
    }
    for i in 0..chain.len() {
        for j in (i + 1)..chain.len() {
            if !cone.leq(&chain[i], &chain[j])? && !cone.leq(&chain[j], &chain[i])? {
                return Err(Error::NotAChain {
                    first: i,
                    second: j,
                });
            }
        }
    }
    let mut top = 0;
    for i in 1..chain.len() {
        if cone.leq(&chain[top], &chain[i])? {
            top = i;
        }
    }
    Ok(chain[top].clone())
}

/// Estimate the normal constant λ of the cone order by sampling pairs with
/// 0 ⪯ x ⪯ y and maximizing ||x||/||y||.
///
/// For orthant kinds pairs are drawn directly (x = u ⊙ y with u in [0,1]^n);
/// for custom cones, cone points are drawn by rejection from [-1, 1]^n and
/// pairs are formed as (k1, k1 + k2), so ordering holds by the cone axioms.
pub fn estimate_normality_constant(
    cone: &ConeOrder,
    norm: Norm,
    samples: usize,
    seed: u64,
) -> Result<NormalityEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = cone.dimension;
    let mut best: f64 = 0.0;
    let mut used = 0;

    match &cone.kind {
        ConeKind::Orthant | ConeKind::WeightedOrthant(_) => {
            for _ in 0..samples {
                let y: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
                let x: Vec<f64> = y
                    .iter()
                    .map(|&yi| yi * rng.random_range(0.0..=1.0))
                    .collect();
                let ny = norm.eval(&y);
                if ny > 0.0 {
                    best = best.max(norm.eval(&x) / ny);
                    used += 1;
                }
            }
        }
        ConeKind::Custom(_) => {
            // Rejection-sample cone points, then pair them additively.
            let mut points: Vec<Vec<f64>> = Vec::new();
            let attempts = samples.saturating_mul(20);
            for _ in 0..attempts {
                if points.len() >= 2 * samples {
                    break;
                }
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                if cone.membership(&v)? {
                    points.push(v);
                }
            }
            for pair in points.chunks_exact(2) {
                let x = &pair[0];
                let y: Vec<f64> = x.iter().zip(&pair[1]).map(|(&a, &b)| a + b).collect();
                let ny = norm.eval(&y);
                if ny > 0.0 {
                    best = best.max(norm.eval(x) / ny);
                    used += 1;
                }
            }
        }
    }

    let analytic = match &cone.kind {
        // 0 <= x_i <= y_i forces ||x|| <= ||y|| for the three monotone norms,
        // and x = y attains the ratio 1.
        ConeKind::Orthant | ConeKind::WeightedOrthant(_) => Some(1.0),
        ConeKind::Custom(_) => None,
    };

    Ok(NormalityEstimate {
        lambda_lower_bound: best,
        samples_used: used,
        analytic_value: analytic,
    })
}

/// Report from spot-checking the convex-cone axioms on random samples.
#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub zero_in_cone: bool,
    pub addition_violations: usize,
    pub scaling_violations: usize,
    pub pointedness_violations: usize,
    pub samples_used: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.zero_in_cone
            && self.addition_violations == 0
            && self.scaling_violations == 0
            && self.pointedness_violations == 0
    }
}

/// Spot-check the cone axioms (0 ∈ K, closure under addition and nonnegative
/// scaling, pointedness) on random samples. Custom cones are sample-validated
/// only; orthant kinds satisfy the axioms by construction but are checked the
/// same way.
pub fn spot_check_axioms(cone: &ConeOrder, samples: usize, seed: u64) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = cone.dimension;
    let mut report = AxiomReport {
        zero_in_cone: cone.membership(&cone.origin())?,
        samples_used: samples,
        ..AxiomReport::default()
    };

    let mut cone_points: Vec<Vec<f64>> = Vec::new();
    for _ in 0..samples {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        if cone.membership(&v)? {
            cone_points.push(v);
        }
    }
    for pair in cone_points.chunks_exact(2) {
        let s: Vec<f64> = pair[0].iter().zip(&pair[1]).map(|(&a, &b)| a + b).collect();
        if !cone.membership(&s)? {
            report.addition_violations += 1;
        }
    }
    for p in &cone_points {
        let t = rng.random_range(0.0..4.0);
        let scaled: Vec<f64> = p.iter().map(|&c| t * c).collect();
        if !cone.membership(&scaled)? {
            report.scaling_violations += 1;
        }
        let neg: Vec<f64> = p.iter().map(|&c| -c).collect();
        if p.iter().any(|&c| c != 0.0) && cone.membership(&neg)? {
            report.pointedness_violations += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn orthant2() -> ConeOrder {
        ConeOrder::orthant(2).unwrap()
    }

    #[test]
    fn leq_componentwise_dominance() {
        let k = orthant2();
        assert!(k.leq(&[1.0, 1.0], &[2.0, 3.0]).unwrap());
    }

    #[test]
    fn leq_incomparable_pair() {
        let k = orthant2();
        assert!(!k.leq(&[1.0, 3.0], &[2.0, 2.0]).unwrap());
        assert!(!k.leq(&[2.0, 2.0], &[1.0, 3.0]).unwrap());
    }

    #[test]
    fn leq_reflexive_on_any_cone() {
        let k = orthant2();
        assert!(k.leq(&[0.3, -7.1], &[0.3, -7.1]).unwrap());
        let custom = ConeOrder::custom(
            2,
            Arc::new(|v: &[f64]| v[0] >= 0.0 && v[1] >= 2.0 * v[0].min(0.0) && v[1] >= 0.0),
        )
        .unwrap();
        assert!(custom.leq(&[1.0, 5.0], &[1.0, 5.0]).unwrap());
    }

    #[test]
    fn leq_dimension_mismatch_is_structured() {
        let k = orthant2();
        match k.leq(&[1.0], &[2.0, 2.0]) {
            Err(Error::DimensionMismatch { expected: 2, got: 1 }) => {}
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
    }

    #[test]
    fn interval_contains_basics() {
        let k = orthant2();
        let iv = OrderInterval::new(vec![0.0, 0.0], vec![1.0, 1.0], k.clone()).unwrap();
        assert!(iv.contains(&[0.5, 0.5]).unwrap());
        assert!(!iv.contains(&[1.5, 0.5]).unwrap());

        let degenerate = OrderInterval::new(vec![0.7, 0.7], vec![0.7, 0.7], k).unwrap();
        assert!(degenerate.contains(&[0.7, 0.7]).unwrap());
    }

    #[test]
    fn interval_rejects_unordered_endpoints() {
        let k = orthant2();
        assert!(OrderInterval::new(vec![1.0, 0.0], vec![0.0, 1.0], k).is_err());
    }

    #[test]
    fn chain_sup_of_finite_chain_is_its_top() {
        let k = orthant2();
        let chain = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(chain_sup(&chain, &k).unwrap(), vec![2.0, 2.0]);
    }

    #[test]
    fn chain_sup_singleton() {
        let k = orthant2();
        assert_eq!(
            chain_sup(&[vec![4.0, -1.0]], &k).unwrap(),
            vec![4.0, -1.0]
        );
    }

    #[test]
    fn chain_sup_rejects_incomparable_pair() {
        let k = orthant2();
        let not_chain = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        match chain_sup(&not_chain, &k) {
            Err(Error::NotAChain { first: 1, second: 2 }) => {}
            other => panic!("expected NotAChain(1, 2), got {other:?}"),
        }
    }

    // Exhaustive oracle for the orthant normality constant: over a coarse
    // grid of pairs 0 <= x <= y the ratio ||x||/||y|| never exceeds 1, and 1
    // is attained at x = y.
    #[test]
    fn orthant_normality_exhaustive_grid_oracle() {
        let steps = [0.0, 0.25, 0.5, 0.75, 1.0];
        for norm in [Norm::Sup, Norm::Euclidean, Norm::L1] {
            let mut max_ratio: f64 = 0.0;
            for &y0 in &steps {
                for &y1 in &steps {
                    for &y2 in &steps {
                        let y = [y0, y1, y2];
                        if norm.eval(&y) == 0.0 {
                            continue;
                        }
                        for &u0 in &steps {
                            for &u1 in &steps {
                                for &u2 in &steps {
                                    let x = [u0 * y0, u1 * y1, u2 * y2];
                                    max_ratio = max_ratio.max(norm.eval(&x) / norm.eval(&y));
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(max_ratio, 1.0);
        }
    }

    #[test]
    fn normality_orthant_r3_sup() {
        let k = ConeOrder::orthant(3).unwrap();
        let est = estimate_normality_constant(&k, Norm::Sup, 500, 7).unwrap();
        assert_eq!(est.analytic_value, Some(1.0));
        assert!(est.lambda_lower_bound <= 1.0);
        assert!(est.samples_used > 0);
    }

    #[test]
    fn normality_scalar_case() {
        let k = ConeOrder::orthant(1).unwrap();
        for norm in [Norm::Sup, Norm::Euclidean, Norm::L1] {
            let est = estimate_normality_constant(&k, norm, 100, 3).unwrap();
            assert_eq!(est.analytic_value, Some(1.0));
        }
    }

    #[test]
    fn normality_custom_cone_reports_no_analytic_value() {
        // Half-plane-style cone: x0 >= 0 and x1 >= x0 (a pointed convex cone).
        let k = ConeOrder::custom(
            2,
            Arc::new(|v: &[f64]| v[0] >= 0.0 && v[1] >= v[0]),
        )
        .unwrap();
        let est = estimate_normality_constant(&k, Norm::Euclidean, 400, 11).unwrap();
        assert_eq!(est.analytic_value, None);
        assert!(est.lambda_lower_bound.is_finite());
    }

    #[test]
    fn axiom_spot_check_accepts_orthant_and_rejects_a_noncone() {
        let k = ConeOrder::orthant(3).unwrap();
        assert!(spot_check_axioms(&k, 400, 5).unwrap().passed());

        // Unit ball is not a cone: fails scaling.
        let ball = ConeOrder::custom(
            2,
            Arc::new(|v: &[f64]| v.iter().map(|c| c * c).sum::<f64>() <= 1.0),
        )
        .unwrap();
        let report = spot_check_axioms(&ball, 400, 5).unwrap();
        assert!(!report.passed());
    }

    proptest! {
        // Partial-order laws on the orthant.
        #[test]
        fn prop_order_laws(
            x in proptest::collection::vec(-5.0f64..5.0, 3),
            y in proptest::collection::vec(-5.0f64..5.0, 3),
            z in proptest::collection::vec(-5.0f64..5.0, 3),
        ) {
            let k = ConeOrder::orthant(3).unwrap();
            prop_assert!(k.leq(&x, &x).unwrap());
            if k.leq(&x, &y).unwrap() && k.leq(&y, &x).unwrap() {
                prop_assert_eq!(&x, &y);
            }
            if k.leq(&x, &y).unwrap() && k.leq(&y, &z).unwrap() {
                prop_assert!(k.leq(&x, &z).unwrap());
            }
        }

        // Orthant leq is exactly componentwise comparison.
        #[test]
        fn prop_orthant_leq_componentwise(
            x in proptest::collection::vec(-5.0f64..5.0, 4),
            y in proptest::collection::vec(-5.0f64..5.0, 4),
        ) {
            let k = ConeOrder::orthant(4).unwrap();
            let expected = x.iter().zip(&y).all(|(&a, &b)| a <= b);
            prop_assert_eq!(k.leq(&x, &y).unwrap(), expected);
        }

        // The sampled bound never exceeds the analytic constant.
        #[test]
        fn prop_normality_bound_below_analytic(seed in 0u64..200, samples in 1usize..300) {
            let k = ConeOrder::orthant(3).unwrap();
            for norm in [Norm::Sup, Norm::Euclidean, Norm::L1] {
                let est = estimate_normality_constant(&k, norm, samples, seed).unwrap();
                prop_assert!(est.lambda_lower_bound <= est.analytic_value.unwrap());
            }
        }

        // chain_sup returns an in-chain upper bound of every element.
        #[test]
        fn prop_chain_sup_upper_bound(len in 1usize..8, seedv in proptest::collection::vec(0.0f64..1.0, 3)) {
            let k = ConeOrder::orthant(3).unwrap();
            // Build a chain by cumulative nonnegative increments.
            let mut chain = vec![seedv.clone()];
            for i in 1..len {
                let prev = chain[i - 1].clone();
                chain.push(prev.iter().map(|&c| c + 0.25).collect());
            }
            let sup = chain_sup(&chain, &k).unwrap();
            prop_assert!(chain.iter().any(|e| e == &sup));
            for e in &chain {
                prop_assert!(k.leq(e, &sup).unwrap());
            }
        }
    }
}
