//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Malformed value: non-finite entry, unsorted breakpoints, empty input, …
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Operands live in different spaces.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    /// A gauge evaluated to a non-positive width at a point that was used.
    #[error("gauge is not positive at t = {0}")]
    InvalidGauge(String),

    /// Bisection hit the depth cap before covering the reported subinterval.
    #[error("no gauge-fine partition found within depth {depth} on [{left}, {right}]")]
    NoFinePartition {
        depth: u32,
        left: String,
        right: String,
    },

    /// `integrate` was handed an empty mesh schedule.
    #[error("mesh schedule is empty")]
    EmptySchedule,

    /// A certified-divergent integrand where an integral value was required.
    #[error("integrand is certified divergent: {0}")]
    Divergent(String),

    /// Gauge schedule exhausted before successive estimates settled.
    #[error("no convergence within gauge schedule (last change {last_change})")]
    NoConvergence { last_change: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
