//! Vector-valued Riemann and Henstock integration at desk scale.
//!
//! The crate provides computable models of sequence spaces (`ℓ_p` for
//! `0 < p ≤ ∞`, sup-norm spaces, nested `ℓ₁`) and of step-function `L_p[0,1]`
//! for `0 < p ≤ 1`, tagged partitions with constant and non-constant gauges,
//! Riemann-sum machinery with an adversarial Cauchy-gap estimator, and a
//! gallery of executable constructions: a fat Cantor set of measure 1/2, the
//! bump-series function that is weak*-continuous but nowhere close to Riemann
//! integrable, the `χ_[0,t]` curve in `L_p` (`p < 1`) whose derivative
//! vanishes identically, and the `ℓ₁` block-separation inequality.
//!
//! Partition geometry is exact: breakpoints, tags and Cantor endpoints are
//! arbitrary-precision rationals. Vector entries and norms are `f64`.
//!
//! The `parallel` feature (on by default) evaluates bulk candidate batches on
//! a rayon pool; reductions always run in a fixed order, so results are
//! bit-identical with and without the feature.

pub mod error;
pub mod exec;
pub mod gallery;
pub mod integration;
pub mod oscillation;
pub mod partitions;
pub mod rat;
pub mod spaces;

pub use error::Error;
pub use rat::Rat;
