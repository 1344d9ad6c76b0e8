//! Boundary behaviour of harmonic functions on the unit disc: approach
//! regions, Stolz shadows, projective adjacency, Poisson integrals of arc data
//! and a divergent bounded harmonic function built level by level.

pub mod adjacency;
pub mod counterexample;
pub mod error;
pub mod ext;
pub mod geometry;
pub mod harmonic;
pub mod multipole;
pub mod regions;

pub use error::{AdjacencyError, BuildError, GeometryError, Hypothesis, RegionError};
pub use geometry::{Arc, ArcUnion, BoundaryPoint, DiscPoint};
