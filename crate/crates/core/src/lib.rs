//! Long-run variance estimation robust to nonstationarity.
//!
//! The crate implements double-kernel HAC (DK-HAC) estimators, which smooth
//! over autocovariance lags and over rescaled time, together with a
//! blockwise VAR prewhitening/recoloring step, MSE-based data-dependent
//! bandwidths, the classical comparison estimators (Newey–West, Andrews,
//! Andrews–Monahan prewhitening, fixed-b and EWC), HAR test statistics, and a
//! Monte Carlo harness for size and power studies.
//!
//! See the runnable programs under `examples/` for one entry point per
//! capability.

pub mod bandwidths;
pub mod error;
pub mod har_tests;
pub mod io;
pub mod kernels;
pub mod local_autocov;
pub mod lrv;
pub mod montecarlo;
pub mod plot;
pub mod prewhiten;
pub mod rng;
pub mod series;
pub mod sls_sim;

pub use error::{HarError, Result};
pub use series::SeriesMatrix;
