//! Vietoris-Rips filtrations, persistence diagrams and distances.

mod bottleneck;
mod filtration;
mod reduction;

pub use bottleneck::bottleneck_distance;
pub use filtration::{Filtration, FiltrationSimplex};
pub use reduction::{compute_persistence, Diagram, DiagramPoint};
