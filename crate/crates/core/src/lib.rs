//! Genus-0 Gromov invariants of partial flag varieties for special Schubert
//! classes, computed exactly by torus localization on the flag Quot scheme.
//!
//! The pipeline is:
//!
//! 1. [`problem`]: describe `F(s₁,…,s_l; n)`, the multidegree `d` and the
//!    insertions `c_β(S_α^*)`, and check the dimension condition.
//! 2. [`fixed_points`]: stream the torus fixed points (subset chains with
//!    weight matrices).
//! 3. [`localization`]: evaluate each fixed point's term at exact weight
//!    samples and sum, in parallel, certifying that the result is an integer
//!    independent of the sample.
//!
//! [`oracles`] holds independent cross-checks.

pub mod arith;
pub mod error;
pub mod fixed_points;
pub mod localization;
pub mod oracles;
pub mod problem;

pub use arith::{Character, Rational, WeightSample};
pub use error::{Error, Result};
pub use fixed_points::{FixedPoint, SubsetChain};
pub use localization::{invariant, invariant_with, EngineConfig, InvariantResult};
pub use problem::{DegreeVector, FlagShape, Insertion, ProblemSpec};
