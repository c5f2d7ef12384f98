//! Convergence and signature-census studies for interpolated metric fields.
//!
//! A [`MetricField`] is sampled at the nodes of a uniform grid of cubes,
//! interpolated elementwise by one of three [`Scheme`]s, and compared against
//! the exact field with tensor Gauss–Legendre quadrature.

pub mod census;
pub mod convergence;
pub mod error;
pub mod grid;
pub mod metric;
pub mod output;
pub mod scheme;

pub use census::{run_signature_census, Census};
pub use convergence::{run_convergence, run_grid, ConvergenceReport, ConvergenceStudy, GridErrors};
pub use error::{BenchError, Result};
pub use grid::{Element, GridSpec, Region, Scheme};
pub use metric::{MetricField, MetricKind};
pub use scheme::ElementInterpolant;
