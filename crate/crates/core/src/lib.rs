//! Graph Stein discrepancies for measuring sample quality.
//!
//! A weighted sample `Q` is compared with a target `P` known only through
//! the score `∇ log p`. The discrepancy is the optimum of one linear program
//! per coordinate over function and gradient values of a Stein function on a
//! sparse graph of the sample points; it is zero only when `Q` matches `P`
//! and its optimal certificates yield the test function that best separates
//! them.

pub mod error;
pub mod lp;
pub mod metrics;
pub mod samplers;
pub mod samples;
pub mod spanner;
pub mod stein;
pub mod targets;

pub use error::{Error, ErrorClass, Result};
pub use samples::{PointSequence, PointSet, WeightedSample};
pub use spanner::{greedy_spanner, Edge, SpannerGraph};
pub use stein::{
    spanner_discrepancy, univariate_complete_discrepancy, Certificate, DiscrepancyResult, SteinFactors,
};
pub use targets::{Target, TargetSpec};
