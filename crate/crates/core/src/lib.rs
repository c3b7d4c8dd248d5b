//! Outage analysis of cooperative NOMA relaying over mmWave vehicular
//! links at a road intersection: closed forms, a Monte Carlo simulator,
//! and the figure sweeps that compare them.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod montecarlo;
pub mod pointprocess;
pub mod quadrature;
pub mod scenario;
pub mod taylor;

pub use error::{Error, Result};
