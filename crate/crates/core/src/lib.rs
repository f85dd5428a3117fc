//! Prediction interval reduction (PIR) for linear models.
//!
//! The crate fits least-squares regressions, builds approximate and exact
//! prediction intervals, and turns their widths into the three sample PIR
//! estimators. It also carries the Monte Carlo harness used to study the
//! bias of those estimators.
//!
//! Everything here is pure computation on owned buffers: the crate is
//! `no_std` and only needs `alloc`. File formats, the CLI and parallel
//! execution live in the `pir` crate.
//!
//! # Modules
//!
//! - [`distributions`]: normal and Student-t CDFs and quantiles, seeded sampling
//! - [`linreg`]: design matrices and QR-based ordinary least squares
//! - [`intervals`]: conditional and marginal prediction intervals, coverage
//! - [`pir`]: population transforms, sample estimators, the ρ → PIR table
//! - [`simulation`]: the equicorrelated-normal bias study
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod distributions;
pub mod error;
pub mod intervals;
mod linalg;
pub use linalg::Matrix;
pub mod linreg;
mod math;
pub mod pir;
pub mod quantile;
pub mod simulation;

pub use error::{Error, Result};
pub use intervals::{Interval, Level, Method};
pub use linreg::{Dataset, DesignMatrix, FitResult};
pub use pir::{PirReport, PopulationAssociation, TableRow};
