//! Points, simplices, Delaunay tessellations with outer simplices,
//! barycentric and cone coordinates, vertex regions and convex distances.

mod delaunay;
mod point;
mod polytope;
mod simplex;
mod tessellation;

pub use delaunay::{delaunay_tessellate, TessellationParams};
pub use point::{argmin_by_key, centroid, Point};
pub use polytope::{HalfSpace, Polytope};
pub use simplex::{
    classify_location, convex_distance_from_bary, uniform_center, vertex_region, BaryCoords,
    SimplexCoords, SimplexPosition,
};
pub use tessellation::{Cell, ConeCoords, Location, OuterSimplex, Tessellation};
