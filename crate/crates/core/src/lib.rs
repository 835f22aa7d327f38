//! Order-theoretic fixed-point computation on cone-ordered vector spaces.
//!
//! The crate provides, in layers:
//!
//! - [`order`]: cone descriptors, the induced partial order, order intervals,
//!   chain suprema, and normality-constant estimation;
//! - [`delta`]: the symmetric sup-inf distance between finite point sets and
//!   the fixed-point membership residual;
//! - [`solvers`]: monotone iteration engines (increasing single-valued,
//!   increasing set-valued, decreasing on a cone) with per-step order
//!   certificates, the no-2-cycle condition checkers, and a brute-force
//!   fixed-point analyzer for finite maps;
//! - [`integral`]: a singular-kernel nonlinear integral-equation solver that
//!   reduces to the decreasing engine and validates against a pointwise
//!   closed-form oracle;
//! - [`registry`]: the builtin maps and kernels the CLI exposes;
//! - [`io`]: CSV/JSON emission and ingestion for point sets, traces,
//!   results, and solutions.

pub mod delta;
pub mod error;
pub mod integral;
pub mod io;
pub mod norm;
pub mod order;
pub mod registry;
pub mod solvers;

pub use delta::{delta, delta_continuity_probe, membership_residual, PointSet};
pub use error::{Error, Result};
pub use integral::{
    apply_operator, compute_g, quadratic_root, solve, validate_kernel, GridFunction,
    IntegralProblem, IntegralSolution, KernelReport, Quadrature,
};
pub use norm::Norm;
pub use order::{
    chain_sup, estimate_normality_constant, spot_check_axioms, ConeKind, ConeOrder,
    NormalityEstimate, OrderInterval,
};
pub use solvers::{
    check_h1, check_h2_equivalence, enumerate_fixed_points, iterate_decreasing,
    iterate_increasing, iterate_setvalued, track_arbitrary_start, DecreasingResult,
    FiniteSelfMap, FiniteSetValuedMap, FixedPointResult, H1Report, H2Report, IterationTrace,
    PosetAnalysis, Selector, SetValuedMap, Termination,
};
