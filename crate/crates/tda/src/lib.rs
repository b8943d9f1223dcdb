//! File formats, date handling and experiment drivers around `tda-core`.
//!
//! The core crate computes; this crate feeds it: CSV parsing of dated
//! multivariate series, log return alignment across price files, parallel
//! sliding-window runs, the three synthetic experiments, SVG charts and
//! run manifests. The `tda` binary in this package exposes all of it on
//! the command line.

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod io;
pub mod manifest;
pub mod series;
pub mod svg;

pub use error::{Error, Result};
