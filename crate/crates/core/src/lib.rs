//! HPD credible intervals for lower-bounded parameters.
//!
//! A model with a linear pivot `(a₁(X) − τ(θ))/a₂(X)` and the constraint
//! `τ(θ) ≥ 0` gets, under the truncated invariant prior, a posterior for `τ`
//! whose highest-density interval has closed form in terms of the pivot cdf.
//! This crate builds those intervals ([`symmetric`], [`asymmetric`]), states
//! their frequentist coverage bounds, adapts a set of standard models
//! ([`models`]) and checks the bounds by simulation ([`coverage`]).
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`, which the model adapters and
//! the simulator use throughout.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymmetric;
pub mod coverage;
pub mod error;
pub mod interval;
pub mod models;
pub mod pivot;
pub mod quadrature;
pub mod real;
pub mod roots;
pub mod special;
pub mod symmetric;

pub use asymmetric::{Classification, SkewCondition, GammaPair, SkewClass};
pub use error::{HpdError, Result};
pub use interval::{BoundDirection, Branch};
pub use pivot::{PivotLaw, Support};
pub use real::Real;
pub use symmetric::RobustnessEnvelope;

pub type Pivot = pivot::Pivot<f64>;
pub type Family = pivot::Family<f64>;
pub type CustomPivot = pivot::CustomPivot<f64>;
pub type CustomPivotBuilder = pivot::CustomPivotBuilder<f64>;
pub type IntervalSpec = interval::IntervalSpec<f64>;
pub type SufficientPair = interval::SufficientPair<f64>;
pub type CredibleInterval = interval::CredibleInterval<f64>;
pub type CoverageBounds = interval::CoverageBounds<f64>;
pub type Hpd<D = Pivot> = interval::Hpd<f64, D>;
