//! Covariance models, trend functions, and the local expansion parameters
//! consumed by the tail asymptotics.
//!
//! Stationary models are specified through their correlation function
//! `r(t) = 1 - D0 |t|^alpha (1 + o(1))`; non-stationary models through a
//! covariance kernel whose standard deviation attains its maximum at the
//! right endpoint of the horizon. Both carry enough metadata to validate
//! the standing assumptions numerically.

mod nonstationary;
mod stationary;
mod trend;
mod verify;

pub use nonstationary::{
    meanint_cov_quadrature, ExpansionParams, HolderBound, NonstationaryKind, NonstationaryModel,
};
pub use stationary::{StationaryKind, StationaryModel};
pub use trend::TrendSpec;
pub use verify::{verify_expansion, ExpansionReport, ExpansionResidual};
