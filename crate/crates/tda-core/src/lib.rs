//! Topological change detection for multivariate time series.
//!
//! The crate turns a window of a multivariate series into a point cloud,
//! computes its Vietoris-Rips persistent homology, summarises the degree 1
//! persistence diagram as a persistence landscape, and tracks the L^p norms
//! of those landscapes across sliding windows. Rising norms, together with
//! the classical early-warning indicators in [`ews`], signal a transition
//! building up in the underlying system.
//!
//! Everything here is deterministic: random inputs are produced by seeded
//! ChaCha12 streams and no computation depends on thread count or iteration
//! order. The crate is `no_std` compatible (with `alloc`); the `std` feature
//! (default) only forwards to dependencies.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod ews;
pub mod geometry;
pub mod landscape;
pub mod persistence;
pub mod pipeline;
pub mod synth;

pub use error::Error;
pub use geometry::{DistanceMatrix, PointCloud};
pub use landscape::{Norm, PersistenceLandscape};
pub use persistence::{
    bottleneck_distance, compute_persistence, Diagram, DiagramPoint, Filtration,
};
