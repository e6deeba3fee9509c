//! Statistics of aggregate radio-frequency interference from a clustered
//! terrestrial network onto a conically scanning satellite radiometer.

pub mod analytic;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod scenario;
pub mod sweep;
pub mod validation;

pub use error::{Error, Result};
pub use geometry::GeometrySummary;
pub use scenario::{GainModel, Lobe, Scenario};
