//! File formats, reports, figures and the command-line front end for
//! [`pir_core`].
//!
//! - [`dataio`]: CSV ingestion and the father/son fixture
//! - [`parallel`]: the simulation grid on a rayon pool
//! - [`output`]: text, CSV and JSON rendering of result tables
//! - [`svg`]: boxplot grids for simulation results
//! - [`cli`]: the `pir` binary

pub mod cli;
pub mod dataio;
pub mod error;
pub mod output;
pub mod parallel;
pub mod svg;

pub use error::{Error, Result};
