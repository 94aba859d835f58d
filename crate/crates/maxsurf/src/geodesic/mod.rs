//! Intrinsic geometry of the graph surface as a triangulated metric space:
//! geodesic distance fields, geodesic discs, circle lengths, and disc
//! integrals.

mod disc;
mod march;
mod mesh;

pub use disc::{disc_extract, disc_integral, GeodesicDisc};
pub use march::{geodesic_distance, geodesic_distance_with_seed_radius, DistanceField};
pub use mesh::{triangulate, TriMesh};
