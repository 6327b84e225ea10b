//! Simulation and asymptotics toolkit for the extremes of chi-processes with
//! trend.
//!
//! A chi-process with `n` degrees of freedom is the pointwise Euclidean norm
//! of `n` independent copies of a centered Gaussian process. This crate
//! provides everything needed to study `P(sup_t (chi_n(t) - g(t)) > u)` at
//! desk scale:
//!
//! - [`covmodels`]: stationary and non-stationary covariance families, trend
//!   functions, and numeric validation of their local expansions.
//! - [`samplers`]: exact Gaussian samplers (circulant embedding, Cholesky
//!   with jitter, separable random fields) with reproducible counter-based
//!   substreams.
//! - [`chi`]: chi-process construction, supremum statistics, Monte Carlo
//!   tail estimates with Wilson intervals, and the exact marginal survival
//!   function.
//! - [`constants`]: Monte Carlo estimation of Pickands and generalized
//!   Piterbarg constants, window/step ladders, and closed-form anchors.
//! - [`asymptotics`]: closed-form tail asymptotics with their case splits,
//!   assembled in log space.
//!
//! All numeric code is generic over the scalar type through [`Real`];
//! concrete `f64` aliases are exported at the crate root.

pub mod asymptotics;
pub mod chi;
pub mod constants;
pub mod covmodels;
mod error;
pub mod quad;
mod real;
pub mod samplers;
pub mod special;

pub use error::Error;
pub use real::Real;

/// Convenience result type used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

// Concrete f64 aliases for the main public types.
pub type StationaryModel64 = covmodels::StationaryModel<f64>;
pub type NonstationaryModel64 = covmodels::NonstationaryModel<f64>;
pub type TrendSpec64 = covmodels::TrendSpec<f64>;
pub type ExpansionParams64 = covmodels::ExpansionParams<f64>;
pub type SampleGrid64 = samplers::SampleGrid<f64>;
pub type PathBatch64 = samplers::PathBatch<f64>;
pub type ChiExperiment64 = chi::ChiExperiment<f64>;
pub type TailEstimate64 = chi::TailEstimate<f64>;
pub type ConstantSpec64 = constants::ConstantSpec<f64>;
pub type ConstantEstimate64 = constants::ConstantEstimate<f64>;
pub type AsymptoticEval64 = asymptotics::AsymptoticEval<f64>;
