//! Diagnostics that put discrepancy values in context: univariate
//! Wasserstein distance, effective sample size, moment and probability
//! errors against a surrogate sample, and log-log rate fits.

mod ess;
mod moments;
mod rate;
mod wasserstein;

pub use ess::{effective_sample_size, min_effective_sample_size};
pub use moments::{error_measures, ErrorMeasures};
pub use rate::{fit_rate, median, spearman};
pub use wasserstein::wasserstein_1d;
